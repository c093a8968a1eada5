import math

import pytest
from hypothesis import given, settings, strategies as st

from digs import params as P
from digs.errors import ConfigError, UnknownPresetError


@pytest.mark.parametrize("name", sorted(P.PRESETS))
def test_every_preset_validates(name):
    assert P.validate(P.preset(name)).ok


def test_fig2_has_no_warnings(fig2):
    report = P.validate(fig2)
    assert report.ok and report.warnings == ()


def test_fig2_green_curve_rate(fig2):
    assert fig2.pump.r_cp == 0.007 and fig2.pump.r_b == 1e-4


def test_fig3_values(fig3):
    assert (fig3.omega_b, fig3.omega_c, fig3.omega_mu) == (0.1, 0.1, 2.0)
    for pair in (("c", "b"), ("cp", "b"), ("cp", "c"), ("bp", "b")):
        assert math.isclose(fig3.relaxation(*pair), 1e-4)
    assert fig3.gamma_C == fig3.gamma_Cp == pytest.approx(1e-4)


def test_gamma_ab_is_half_gamma_a_without_dephasing():
    assert P.SystemParams(gamma_a=2.0).gamma_ab == 1.0
    assert P.SystemParams(gamma_a=2.0, gamma_ph_ab=0.5).gamma_ab == 1.5


def test_equal_branching_validates():
    assert P.validate(P.SystemParams(pump=P.ClosedPump(r=0.01))).ok


def test_zero_alpha_cp_warns_gain_impossible():
    report = P.validate(P.SystemParams(pump=P.ClosedPump(r=0.01, alpha_b=0.5, alpha_c=0.5, alpha_cp=0.0)))
    assert report.ok
    assert "gain-impossible" in [w[0] for w in report.warnings]


@pytest.mark.parametrize("pump,rule", [
    (P.ClosedPump(r=0.01, alpha_b=0.5, alpha_c=0.5, alpha_cp=0.1), "branching-sum"),
    (P.ClosedPump(r=-0.01), "negative-pump"),
    (P.OpenPump(r_b=-1.0), "negative-pump"),
])
def test_pump_violations(pump, rule):
    report = P.validate(P.SystemParams(pump=pump))
    assert not report.ok and rule in [v[0] for v in report.violations]


def test_negative_rate_is_a_violation():
    report = P.validate(P.SystemParams(gamma_ph_bc=-1e-3))
    assert "negative-rate" in [v[0] for v in report.violations]


def test_closed_ground_decay_is_a_violation():
    report = P.validate(P.SystemParams(gamma_b=1e-3))
    assert "closed-ground-decay" in [v[0] for v in report.violations]


def test_regime_warnings():
    report = P.validate(P.SystemParams(omega_p=0.05, omega_b=1.5, pump=P.ClosedPump(r=0.5)))
    kinds = {w[0] for w in report.warnings}
    assert {"probe-strength", "rf-strength", "pump-rate"} <= kinds


def test_unknown_preset():
    with pytest.raises(UnknownPresetError):
        P.preset("fig99")


def test_replace_routes_pump_fields(fig3):
    q = fig3.replace(r=0.01, omega_b=0.2)
    assert q.pump.r == 0.01 and q.omega_b == 0.2 and fig3.pump.r == 0.04
    with pytest.raises(ConfigError):
        fig3.replace(bogus=1.0)


def test_pump_broadening_flag_adds_half_r(fig3):
    base = fig3.relaxation("c", "a")
    assert fig3.replace(pump_broadening=True).relaxation("c", "a") == pytest.approx(base + 0.02)
    assert fig3.replace(pump_broadening=True).relaxation("c", "cp") == pytest.approx(fig3.relaxation("c", "cp"))


def test_relaxation_rule(fig2):
    assert fig2.relaxation("b", "cp") == pytest.approx(1e-4)
    assert fig2.relaxation("a", "c") == pytest.approx(1.0 + 0.5e-4)


@pytest.mark.parametrize("name", sorted(P.PRESETS))
def test_preset_round_trip(name):
    p = P.preset(name)
    assert P.loads(P.dumps(p)) == p


finite = st.floats(min_value=0, max_value=10, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(omega_b=finite, omega_mu=finite, gamma=st.floats(min_value=0, max_value=1e-2), r=finite,
       open_=st.booleans(), pb=st.one_of(st.none(), st.complex_numbers(max_magnitude=2, allow_nan=False)))
def test_round_trip_is_bit_exact(omega_b, omega_mu, gamma, r, open_, pb):
    pump = P.OpenPump(r_b=r, r_cp=r / 3) if open_ else P.ClosedPump(r=r, alpha_b=0.2, alpha_c=0.3, alpha_cp=0.5)
    p = P.SystemParams(omega_b=omega_b, omega_mu=omega_mu, gamma_ph_bc=gamma, pump=pump, p_b=pb)
    q = P.loads(P.dumps(p))
    assert q == p or (pb is not None and q.replace(p_b=None) == p.replace(p_b=None)
                      and repr(q.p_b) == repr(complex(p.p_b)))


def test_config_file_with_preset_and_override(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[system]\npreset = fig3-closed\nomega_b = 0.2\n\n[pump]\nr = 0.01\n")
    p = P.load_config(path)
    assert p.omega_b == 0.2 and p.pump.r == 0.01 and p.gamma_C == pytest.approx(1e-4)


def test_config_switches_variant(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[pump]\nvariant = open\nr_b = 0.001\n")
    p = P.load_config(path)
    assert p.pump.variant == "open" and p.pump.r_b == 0.001 and p.pump.r_cp == 0.0


@pytest.mark.parametrize("text", ["[system]\nomega_q = 1\n", "[pump]\nvariant = half\n",
                                  "[system]\nomega_b = fast\n", "[extra]\nx = 1\n", "no header"])
def test_bad_configs(tmp_path, text):
    path = tmp_path / "bad.ini"
    path.write_text(text)
    with pytest.raises(ConfigError):
        P.load_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        P.load_config(tmp_path / "absent.ini")
