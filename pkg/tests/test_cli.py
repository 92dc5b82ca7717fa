"""End-to-end command-line runs: exit codes, artifacts, determinism."""

import json
import math

import numpy as np
import pytest

from pinchflow.cli import main
from pinchflow.flow import read_timeseries_csv
from pinchflow.geometry import read_support_csv


def write_config(tmp_path, doc, name="config.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


BALL_SIM = {
    "initial": {"kind": "ball", "radius": 1.0},
    "speed": "mean",
    "n": 128,
    "cfl_safety": 1.0,
    "record_every": 25,
    "stop_inradius_fraction": 0.01,
    "t_end": 0.45,
}


def test_simulate_ball_matches_law(tmp_path):
    cfg = write_config(tmp_path, BALL_SIM)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "simulate"]) == 0
    records = read_timeseries_csv(out / "series.csv")
    err = max(abs(r.r_minus - math.sqrt(1.0 - 2.0 * r.t)) for r in records)
    assert err < 1e-5
    final = read_support_csv(out / "final_state.csv")
    np.testing.assert_allclose(final.s, math.sqrt(1.0 - 2.0 * 0.45), atol=1e-5)


def test_simulate_rescale_mode_emits_unit_ball(tmp_path):
    cfg = write_config(tmp_path, dict(BALL_SIM, rescale_mode="by_extinction_law"))
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "simulate"]) == 0
    scaled = read_support_csv(out / "rescaled_final.csv")
    np.testing.assert_allclose(scaled.s, 1.0, atol=1e-4)


def test_simulate_config_errors(tmp_path):
    bad_speed = write_config(tmp_path, dict(BALL_SIM, speed="power_mean:0"))
    assert main(["--config", bad_speed, "--out", str(tmp_path / "a"),
                 "simulate"]) == 1
    unknown_key = write_config(tmp_path, dict(BALL_SIM, wibble=3), "k.json")
    assert main(["--config", unknown_key, "--out", str(tmp_path / "b"),
                 "simulate"]) == 1
    assert main(["--out", str(tmp_path / "c"), "simulate"]) == 1
    missing = str(tmp_path / "absent.json")
    assert main(["--config", missing, "--out", str(tmp_path / "d"),
                 "simulate"]) == 1


def test_simulate_deterministic_outputs(tmp_path):
    cfg = write_config(tmp_path, BALL_SIM)
    outs = []
    for tag in ("one", "two"):
        out = tmp_path / tag
        assert main(["--config", cfg, "--out", str(out), "simulate"]) == 0
        outs.append(out)
    assert (outs[0] / "series.csv").read_bytes() == (outs[1] / "series.csv").read_bytes()
    assert (outs[0] / "final_state.csv").read_bytes() == \
        (outs[1] / "final_state.csv").read_bytes()


def test_simulate_sweep_with_jobs(tmp_path):
    doc = {"sweep": [dict(BALL_SIM, name="r1"),
                     dict(BALL_SIM, name="r2", speed="harmonic")]}
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "sweep"
    assert main(["--config", cfg, "--out", str(out), "--jobs", "2",
                 "simulate"]) == 0
    assert (out / "r1" / "series.csv").exists()
    assert (out / "r2" / "series.csv").exists()


def test_print_config_echo(tmp_path, capsys):
    cfg = write_config(tmp_path, BALL_SIM)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "--print-config",
                 "simulate"]) == 0
    echoed = capsys.readouterr().out
    doc = json.loads(echoed[:echoed.index("\nsimulate:") + 1])
    assert doc["command"] == "simulate"
    assert doc["seed"] == 42
    assert doc["config"] == BALL_SIM


def test_simulate_plot_renders_figures(tmp_path):
    cfg = write_config(tmp_path, dict(BALL_SIM, t_end=0.1))
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "--plot", "simulate"]) == 0
    assert (out / "series.png").stat().st_size > 0
    assert (out / "final_state.png").stat().st_size > 0


def test_build_counterexample_witness(tmp_path):
    cfg = write_config(tmp_path, {"r1": 3.5, "u0": 0.05, "U": 1.0,
                                  "speed": "gauss", "m": 2048,
                                  "quad_tol": 1e-8})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "build-counterexample"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["witness"] is not None
    assert summary["witness"]["dgdt"] > 0.0
    assert summary["max_uprime_on_annulus"] > 1.5
    assert (out / "profile.csv").exists()


def test_build_counterexample_no_witness(tmp_path):
    cfg = write_config(tmp_path, {"r1": 2.0, "u0": 0.05, "speed": "gauss",
                                  "m": 2048, "quad_tol": 1e-8})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "build-counterexample"]) == 3
    summary = json.loads((out / "summary.json").read_text())
    assert summary["witness"] is None


def test_build_counterexample_config_errors(tmp_path):
    bad_spec = write_config(tmp_path, {"r1": 3.5, "u0": 1.5, "U": 1.0,
                                       "speed": "gauss"})
    assert main(["--config", bad_spec, "--out", str(tmp_path / "a"),
                 "build-counterexample"]) == 1
    degree_one = write_config(tmp_path, {"r1": 3.5, "u0": 0.05,
                                         "speed": "mean"}, "d1.json")
    assert main(["--config", degree_one, "--out", str(tmp_path / "b"),
                 "build-counterexample"]) == 1


def test_verify_identities_catalog(tmp_path):
    cfg = write_config(tmp_path, {"speeds": ["mean", "geometric", "harmonic",
                                             "power_mean:0.5", "power_mean:2",
                                             "power_mean:4", "gauss"],
                                  "samples": 10000})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "verify-identities"]) == 0
    report = json.loads((out / "identities.json").read_text())
    assert report["ok"] is True
    assert report["max_residual"] < 1e-8
    assert report["seed"] == 42


def test_verify_identities_broken_speed(tmp_path):
    cfg = write_config(tmp_path, {"speeds": ["mean", "_broken"]})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "verify-identities"]) == 4
    report = json.loads((out / "identities.json").read_text())
    assert report["ok"] is False


def test_verify_identities_empty_list(tmp_path):
    cfg = write_config(tmp_path, {"speeds": []})
    assert main(["--config", cfg, "--out", str(tmp_path / "o"),
                 "verify-identities"]) == 1


@pytest.mark.parametrize("speed,critical", [("gauss", 3.0), ("pow:mean:3", 2.0)])
def test_qform_scan_finds_critical_ratio(tmp_path, speed, critical):
    cfg = write_config(tmp_path, {"speed": speed, "r_min": 1.01,
                                  "r_max": 6.0, "r_step": 0.01})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "qform-scan"]) == 0
    report = json.loads((out / "qform_scan.json").read_text())
    assert abs(report["sign_change"] - critical) <= 0.01
    rows = (out / "qform_scan.csv").read_text().splitlines()
    assert rows[0] == "r,c1,c2,q"
    assert len(rows) > 400


def test_qform_scan_degree_one_all_nonpositive(tmp_path):
    cfg = write_config(tmp_path, {"speed": "mean"})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "qform-scan"]) == 0
    report = json.loads((out / "qform_scan.json").read_text())
    assert report["sign_change"] is None
    assert report["max_q"] <= 0.0
