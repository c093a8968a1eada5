import numpy as np
import pytest
from scipy.optimize import curve_fit
from scipy.special import voigt_profile

from digs import analytic as A, doppler as D, params as P
from digs.errors import ConfigError, UnknownPresetError

RB87_MASS = 86.909 * 1.66053906660e-27


@pytest.fixture
def fig8():
    return P.preset("doppler-fig8")


def test_spec_validation():
    with pytest.raises(ConfigError):
        D.DopplerSpec(sigma_delta=-1.0)
    with pytest.raises(ConfigError):
        D.DopplerSpec(truncation=3.0)
    with pytest.raises(ConfigError):
        D.DopplerSpec(rel_tol=0.0)


def test_presets():
    assert D.doppler_preset("doppler-fig8").sigma_delta == 0.05
    assert D.doppler_preset("doppler-fig9").sigma_delta_p == 10.0
    with pytest.raises(UnknownPresetError):
        D.doppler_preset("fig2-open")


def test_thermal_velocity_width():
    w = D.doppler_widths(300.0, RB87_MASS, 1e8)
    assert w.sigma_v == pytest.approx(400.0, rel=0.05)
    assert 10.0 < w.sigma_D < 1000.0
    assert 1e8 < D.doppler_widths(300.0, RB87_MASS, 1e15).sigma_D < 1e10


def test_reduced_width():
    w = D.doppler_widths(300.0, RB87_MASS, 2.37e15, gamma_ab_si=5e6)
    assert w.sigma_D_reduced == pytest.approx(w.sigma_D / 5e6)
    with pytest.raises(ConfigError):
        D.doppler_widths(0.0, RB87_MASS, 1e8)


def test_zero_width_is_exact(fig8):
    for x in (0.0, 0.03, 0.05):
        assert D.broadened_susceptibility(fig8, x, D.DopplerSpec()) == complex(A.general_spectrum(fig8, x))


@pytest.mark.parametrize("axis", ["sigma_delta", "sigma_delta_p"])
def test_small_width_matches_unbroadened(fig8, axis):
    spec = D.DopplerSpec(**{axis: 1e-7})
    for x in (0.02, 0.05):
        v = D.broadened_susceptibility(fig8, x, spec)
        ref = complex(A.general_spectrum(fig8, x))
        assert abs(v - ref) < 1e-5 * abs(ref)


def test_constant_integrand_is_preserved(monkeypatch, fig8):
    monkeypatch.setattr(D.kernels, "chi_general", lambda dp, dmu, c, s: np.full(np.shape(dp), 0.7 - 0.2j))
    v = D.broadened_susceptibility(fig8, 0.05, D.DopplerSpec(sigma_delta_p=0.3, sigma_delta=0.02))
    assert abs(v - (0.7 - 0.2j)) < 1e-6


def test_axis_collapse_matches_two_dimensional(fig8):
    for spec1, spec2 in ((D.DopplerSpec(sigma_delta=0.01), D.DopplerSpec(sigma_delta=0.01, sigma_delta_p=1e-9)),
                         (D.DopplerSpec(sigma_delta_p=0.5), D.DopplerSpec(sigma_delta_p=0.5, sigma_delta=1e-9))):
        a = D.broadened_susceptibility(fig8, 0.05, spec1)
        b = D.broadened_susceptibility(fig8, 0.05, spec2)
        assert abs(a - b) < 1e-4 * abs(a)


def test_washout_is_monotone(fig8):
    peaks = [abs(D.broadened_susceptibility(fig8, fig8.omega_b / 2, D.DopplerSpec(sigma_delta_p=0.001,
                                                                                   sigma_delta=s)).imag)
             for s in (0.0, 0.001, 0.005, 0.01, 0.05)]
    assert all(b <= a for a, b in zip(peaks, peaks[1:]))


def test_one_photon_broadening_keeps_slope():
    p = P.preset("doppler-fig9")
    ref = D.broadened_slope(p, 0.0, D.DopplerSpec(sigma_delta=0.001))
    for s in (0.1, 1.0):
        v = D.broadened_slope(p, 0.0, D.DopplerSpec(sigma_delta_p=s, sigma_delta=0.001))
        assert v == pytest.approx(ref, rel=0.01)


def test_sensitivity_ratio(fig8):
    f = D.feature_sensitivity(fig8.replace(omega_c=0.1, omega_mu=2.0), D.DopplerSpec())
    assert f.coeff_one_photon / f.coeff_two_photon == pytest.approx(0.0025)


def test_homogeneous_width(fig8):
    f = D.feature_sensitivity(fig8, D.DopplerSpec())
    gn = A.feature_width(fig8.omega_c, fig8.omega_mu, fig8.gamma_ab, fig8.gamma_Cp)
    assert f.width == pytest.approx(gn) and f.homogeneous_width == gn


def test_dominant_axis(fig8):
    assert D.feature_sensitivity(fig8, D.DopplerSpec(sigma_delta_p=1.0, sigma_delta=0.01)).dominant_axis == "two-photon"
    assert D.feature_sensitivity(fig8, D.DopplerSpec(sigma_delta_p=10.0, sigma_delta=1e-3)).dominant_axis == "one-photon"


def test_two_photon_width_matches_fit(fig8):
    gn = A.feature_width(fig8.omega_c, fig8.omega_mu, fig8.gamma_ab, fig8.gamma_Cp)
    spec = D.DopplerSpec(sigma_delta=gn)
    f = D.feature_sensitivity(fig8, spec)
    assert 1.5 * gn < f.width < 2.5 * gn
    x = np.linspace(0.05 - 8 * f.width, 0.05 + 8 * f.width, 161)
    y = np.array([D.broadened_susceptibility(fig8, v, spec).imag for v in x])
    model = lambda x, h, c, s, g, b0, b1: h * voigt_profile(x - c, abs(s), abs(g)) + b0 + b1 * (x - 0.05)
    (h, c, s, g, b0, b1), _ = curve_fit(model, x, y, p0=[-1e-3, 0.05, gn, gn, 0.0, 0.0])
    assert D.voigt_half_width(abs(g), abs(s)) == pytest.approx(f.width, rel=0.05)
