import json

import numpy as np
import pytest

from ffo.cli import (ScenarioConfig, main, parse_config, run,
                     serialize_config)
from ffo.errors import ConfigError

GOOD = """
{
  "hamiltonian": {
    "omega": {"type": "sinusoid", "amplitude": 0.3, "frequency": 1.0, "offset": 1.0},
    "f_re": {"type": "constant", "value": 0.5},
    "f_im": {"type": "constant", "value": 0.1},
    "g": {"type": "polynomial", "coeffs": [0.2, 0.01]}
  },
  "run": {"mode": "invariants", "t_final": 2.0, "dt": 0.001},
  "initial": {"nu0": [[1, 0], [0, 0], [0, 0]]},
  "output": {"format": "csv"}
}
"""


def test_parse_round_trip():
    cfg = parse_config(GOOD)
    text = serialize_config(cfg)
    cfg2 = parse_config(text)
    assert cfg2.spec == cfg.spec
    assert (cfg2.mode, cfg2.t_final, cfg2.dt) == (cfg.mode, cfg.t_final, cfg.dt)
    assert cfg2.nu0 == cfg.nu0
    # serialization is stable under a second round trip
    assert serialize_config(cfg2) == text


def test_negative_dt_rejected_with_path():
    bad = GOOD.replace('"dt": 0.001', '"dt": -0.5')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.path == "run.dt"


def test_unknown_key_rejected_with_path():
    bad = GOOD.replace('"g":', '"gee": {"type": "constant"}, "g":')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "hamiltonian.gee" in str(err.value)


def test_unknown_mode_rejected():
    bad = GOOD.replace('"invariants"', '"frobnicate"')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.path == "run.mode"


def test_tabulated_non_increasing_rejected():
    bad = GOOD.replace(
        '{"type": "constant", "value": 0.5}',
        '{"type": "tabulated", "times": [0.0, 1.0, 0.5], "values": [1, 2, 3]}')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert err.value.path == "hamiltonian.f_re"


def test_unknown_signal_type_rejected():
    bad = GOOD.replace('"constant", "value": 0.5', '"ramp", "value": 0.5')
    with pytest.raises(ConfigError):
        parse_config(bad)


def test_unknown_tolerance_rejected():
    bad = GOOD.replace('"dt": 0.001', '"dt": 0.001, "tolerances": {"bogus": 1.0}')
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "run.tolerances.bogus" in str(err.value)


def test_run_invariants_report():
    cfg = parse_config(GOOD)
    report, tables = run("invariants", cfg)
    assert report.passed
    names = [c["name"] for c in report.checks]
    assert "oracle_deviation" in names and "lambda1_drift" in names
    header, cols = tables["invariants"]
    assert header[0] == "t" and len(cols[0]) == 2001
    obj = report.to_json_obj()
    assert obj["schema"] == 1 and "wall_time_s" not in obj


def test_main_writes_deterministic_csv(tmp_path):
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(GOOD)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["invariants", "--config", str(cfg_path), "--out", str(out1)]) == 0
    assert main(["invariants", "--config", str(cfg_path), "--out", str(out2)]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    header = b1.decode().splitlines()[0].split(",")
    assert header[0] == "t"
    # full-precision round trip: parse a float back exactly
    row = b1.decode().splitlines()[2].split(",")
    assert float(row[0]) == 0.001


def test_main_json_report(tmp_path):
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(GOOD)
    out = tmp_path / "report.json"
    code = main(["invariants", "--config", str(cfg_path), "--out", str(out),
                 "--format", "json"])
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["schema"] == 1
    assert obj["passed"] is True
    assert {c["name"] for c in obj["checks"]} >= {"oracle_deviation", "lambda1_drift"}


def test_main_field_selector(tmp_path):
    doc = json.loads(GOOD)
    doc["output"]["fields"] = ["t", "lambda2"]
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(json.dumps(doc))
    out = tmp_path / "sel.csv"
    assert main(["invariants", "--config", str(cfg_path), "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "t,lambda2"


def test_main_bad_config_exit_2(tmp_path):
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(GOOD.replace('"dt": 0.001', '"dt": -1'))
    assert main(["invariants", "--config", str(cfg_path)]) == 2


def test_main_missing_config_exit_2():
    assert main(["invariants"]) == 2


def test_main_grassmann_selftest_no_config():
    assert main(["grassmann-selftest"]) == 0


def test_main_failing_tolerance_exit_1(tmp_path):
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(GOOD)
    # an absurd primary tolerance forces a check failure (report still emitted)
    out = tmp_path / "r.json"
    code = main(["invariants", "--config", str(cfg_path), "--tol", "1e-30",
                 "--out", str(out), "--format", "json"])
    assert code == 1
    assert json.loads(out.read_text())["passed"] is False


def test_main_sweep_runs(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["invariants", "--sweep", "3", "--seed", "11",
                 "--t-final", "2", "--out", str(out)])
    assert code == 0
    for i in range(3):
        assert (tmp_path / f"sweep-{i:03d}.csv").exists()


def test_flag_overrides():
    cfg = parse_config(GOOD)
    report, _ = run("coherence", cfg)
    # forced spec: witness semantics
    assert report.checks[0]["name"] == "forcing_witness"


def test_invariants_scenario_with_rotating_forcing(tmp_path):
    # omega = 1 + 0.3 sin t, f = 0.5 exp(0.1 i t) entered as a sinusoid pair
    doc = {
        "hamiltonian": {
            "omega": {"type": "sinusoid", "amplitude": 0.3, "frequency": 1.0,
                      "offset": 1.0},
            "f_re": {"type": "sinusoid", "amplitude": 0.5, "frequency": 0.1,
                     "phase": np.pi / 2},
            "f_im": {"type": "sinusoid", "amplitude": 0.5, "frequency": 0.1},
            "g": {"type": "constant", "value": 0.0},
        },
        "run": {"mode": "invariants", "t_final": 5.0, "dt": 0.001},
        "initial": {"nu0": [[1, 0], [0, 0], [0, 0]]},
        "output": {"format": "csv"},
    }
    cfg_path = tmp_path / "rot.json"
    cfg_path.write_text(json.dumps(doc))
    out = tmp_path / "rot.csv"
    assert main(["invariants", "--config", str(cfg_path), "--out", str(out)]) == 0
    header = out.read_text().splitlines()[0].split(",")
    assert header == ["t", "re_nu_minus", "im_nu_minus", "re_nu_plus", "im_nu_plus",
                      "re_nu_3", "im_nu_3", "abs_lambda1", "lambda2", "oracle_dev"]
    report, _ = run("invariants", parse_config(cfg_path.read_text()))
    oracle = [c for c in report.checks if c["name"] == "oracle_deviation"][0]
    assert oracle["value"] <= 1e-6


def test_coherence_free_spec_passes(tmp_path):
    doc = {
        "hamiltonian": {"omega": {"type": "constant", "value": 1.2},
                        "g": {"type": "sinusoid", "amplitude": 0.4, "frequency": 0.7}},
        "run": {"mode": "coherence", "t_final": 5.0, "dt": 0.001},
    }
    cfg_path = tmp_path / "coh.json"
    cfg_path.write_text(json.dumps(doc))
    out = tmp_path / "coh.csv"
    assert main(["coherence", "--config", str(cfg_path), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    cols = lines[0].split(",")
    i_ratio = cols.index("re_zeta_ratio")
    last = lines[-1].split(",")
    t = float(last[0])
    assert complex(float(last[i_ratio]), float(last[i_ratio + 1])) == pytest.approx(
        np.exp(-1.2j * t), abs=1e-8)
