import csv
import json

import numpy as np
import pytest

from digs import __version__
from digs.cli import main


def read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_two_method_comparison(tmp_path, capsys):
    code = main(["spectrum", "--preset", "fig3-closed", "--r", "0.04", "--grid", "-2:2:401",
                 "--method", "analytic,numeric", "--out", str(tmp_path), "--assert", "0.05"])
    assert code == 0
    assert "max |Im chi" in capsys.readouterr().out
    assert len(read(tmp_path / "spectrum_analytic-general.csv")) == 401
    assert len(read(tmp_path / "spectrum_numeric.csv")) == 401
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["version"] == __version__ and m["params"]["pump"]["r"] == 0.04
    assert m["methods"] == ["analytic-general", "numeric"] and m["max_deviation"] <= 0.05
    assert len(m["outputs"]) == 2 and m["duration_s"] >= 0


def test_assert_breach_exits_4(tmp_path):
    code = main(["spectrum", "--preset", "fig3-closed", "--grid", "-2:2:101", "--method",
                 "analytic-resonant,numeric", "--out", str(tmp_path), "--assert", "1e-9"])
    assert code == 4


def test_single_point(tmp_path):
    assert main(["spectrum", "--preset", "fig6-dispersion", "--grid", "0:0:1", "--out", str(tmp_path)]) == 0
    rows = read(tmp_path / "spectrum_analytic-general.csv")
    assert len(rows) == 1 and float(rows[0]["delta_p"]) == 0.0


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        main(["spectrum", "--preset", "fig2-open", "--grid", "-1:1:51", "--method", "analytic,numeric",
              "--medium", "kash-rb87", "--out", str(d)])
    for name in ("spectrum_analytic-general.csv", "spectrum_numeric.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_json_and_long_formats(tmp_path):
    assert main(["spectrum", "--preset", "fig6-dispersion", "--grid", "-0.1:0.1:5", "--method",
                 "analytic-resonant,analytic-general", "--format", "json", "--long", "--out", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "spectrum_analytic-resonant.json").read_text())
    assert len(d["delta_p"]) == 5
    rows = read(tmp_path / "spectrum_long.csv")
    assert len(rows) == 10 and {r["method"] for r in rows} == {"analytic-resonant", "analytic-general"}


def test_doppler_method(tmp_path):
    assert main(["spectrum", "--preset", "doppler-fig8", "--method", "doppler", "--grid", "0.04:0.06:3",
                 "--out", str(tmp_path)]) == 0
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["doppler"]["sigma_delta"] == 0.05
    assert len(read(tmp_path / "spectrum_doppler.csv")) == 3


@pytest.mark.parametrize("argv", [
    ["spectrum", "--grid", "2:1:5"],
    ["spectrum", "--method", "guess"],
    ["spectrum", "--preset", "nope"],
    ["spectrum", "--omega-b", "-1"],
    ["spectrum", "--bogus"],
    ["populations", "--preset", "fig2-open"],
    ["spectrum", "--preset", "fig3-closed", "--r-cp", "0.1"],
])
def test_config_errors_exit_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_numeric_failure_exits_3(tmp_path):
    code = main(["spectrum", "--preset", "doppler-fig8", "--method", "numeric", "--grid", "0:0:1",
                 "--out", str(tmp_path)])
    assert code == 3


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[system]\npreset = fig3-closed\nomega_b = 0.2\n[pump]\nvariant = closed\nr = 0.01\n")
    out = tmp_path / "o"
    assert main(["thresholds", "--config", str(cfg), "--omega-b", "0.3", "--out", str(out)]) == 0
    params = json.loads((out / "manifest.json").read_text())["params"]
    assert params["omega_b"] == 0.3 and params["pump"]["r"] == 0.01


def test_populations_sweep(tmp_path):
    assert main(["populations", "--preset", "fig5-populations", "--r-sweep", "0:0.05:11",
                 "--out", str(tmp_path), "--assert", "0.1"]) == 0
    rows = read(tmp_path / "populations.csv")
    assert len(rows) == 11 and len(rows[0]) == 11


def test_populations_unpumped_point(tmp_path):
    assert main(["populations", "--preset", "fig5-populations", "--r-sweep", "0:0:1", "--out", str(tmp_path)]) == 0
    row = read(tmp_path / "populations.csv")[0]
    for kind in ("analytic", "numeric"):
        assert float(row[f"{kind}_rho_bb"]) == pytest.approx(0.5, abs=1e-9)
        assert float(row[f"{kind}_rho_bpbp"]) == pytest.approx(0.5, abs=1e-9)


def test_populations_without_cp_branch(tmp_path):
    assert main(["populations", "--preset", "fig5-populations", "--r-sweep", "0:0.05:6", "--alpha-b", "0.5",
                 "--alpha-c", "0.5", "--alpha-cp", "0", "--out", str(tmp_path)]) == 0
    rows = read(tmp_path / "populations.csv")
    # the numeric column is fed from |c> by the c-c' field; the closed form carries no such path
    assert all(float(r["analytic_rho_cpcp"]) == 0 for r in rows)


def test_thresholds_closed(tmp_path, capsys):
    assert main(["thresholds", "--preset", "fig3-closed", "--out", str(tmp_path), "--assert"]) == 0
    rep = json.loads((tmp_path / "thresholds.json").read_text())
    assert rep["gain_threshold"] < rep["anomalous_threshold"]
    assert rep["anomalous_population_ratio"] == pytest.approx(2.0)
    assert "gain_threshold" in capsys.readouterr().out


def test_thresholds_headline(tmp_path):
    assert main(["thresholds", "--preset", "kash-rb87", "--medium", "kash-rb87", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "thresholds.json").read_text())
    assert rep["delay_ratio"] == pytest.approx(-0.6, abs=1e-6)
    assert rep["group_delay_s"] == pytest.approx(-0.156e-3, rel=0.01)
    assert rep["group_velocity_m_s"] == pytest.approx(-150.0, rel=0.01)
    assert np.isfinite(rep["group_index"])
