"""Config parsing, sweep execution, row serialization, and the command-line
surface (exit codes, artifacts, determinism)."""

import json
import subprocess
import sys

import numpy as np
import pytest

from nhladder.errors import ConfigError
from nhladder.model import Boundary, LadderParams
from nhladder.sweep import (
    format_value,
    gbz_rows,
    load_config,
    mode_rows,
    run_sweep,
    spectrum_rows,
)

BASE = dict(j_amp=0.6, eta=0.8, eta_lock="antisymmetric", delta=0.5, n_cells=2)
SCAN = dict(
    BASE,
    quantity="awn",
    boundary="periodic",
    n_k=64,
    n_phi=32,
    axis1_field="j_amp",
    axis1_start=0.2,
    axis1_stop=1.4,
    axis1_num=3,
)


def _cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "nhladder.cli", *args],
        capture_output=True, text=True, cwd=cwd,
    )


def _write_yaml(path, mapping):
    lines = [f"{k}: {v}" for k, v in mapping.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------- config


def test_load_config_expands_the_locked_asymmetry():
    cfg = load_config(BASE)
    assert cfg.params.eta_a == 0.8
    assert cfg.params.eta_b == -0.8
    assert cfg.eta_lock == "antisymmetric"
    assert cfg.axes == ()
    cfg_sym = load_config({**BASE, "eta_lock": "symmetric"})
    assert cfg_sym.params.eta_b == 0.8


@pytest.mark.parametrize(
    "patch, fragment",
    [
        ({"jamp_typo": 1.0}, "unknown config keys: jamp_typo"),
        ({"eta_lock": "weird"}, "eta_lock"),
        ({"eta_a": 0.1}, "not both"),
        ({"axis2_field": "delta", "axis2_start": 0.0, "axis2_stop": 1.0, "axis2_num": 2},
         "axis2 given without axis1"),
        ({"axis1_field": "delta", "axis1_start": 0.0}, "incomplete axis1"),
        ({"axis1_field": "t0", "axis1_start": 0.1, "axis1_stop": 1.0, "axis1_num": 2},
         "not sweepable"),
        ({"quantity": "nonsense"}, "unknown quantity"),
        ({"delta": True}, "must be a number"),
        ({"n_cells": 2.5}, "must be an integer"),
    ],
)
def test_load_config_rejections(patch, fragment):
    with pytest.raises(ConfigError, match=fragment):
        load_config({**BASE, **patch})


def test_load_config_requires_the_core_couplings():
    with pytest.raises(ConfigError, match="missing required config keys: j_amp"):
        load_config({k: v for k, v in BASE.items() if k != "j_amp"})


# ---------------------------------------------------------------- sweeps


def test_scalar_scan_shapes_and_values():
    res = run_sweep(load_config(SCAN))
    assert res.header == ("axis1", "value")
    assert res.values.shape == (3,)
    np.testing.assert_allclose(res.values, [-1.0, -0.625, -0.25], atol=1e-12)


def test_two_axis_scan_and_thread_determinism():
    cfg = load_config(
        {
            **SCAN,
            "axis2_field": "delta",
            "axis2_start": -0.5,
            "axis2_stop": 0.5,
            "axis2_num": 2,
        }
    )
    serial = run_sweep(cfg, threads=1)
    threaded = run_sweep(cfg, threads=4)
    assert serial.header == ("axis1", "axis2", "value")
    assert serial.values.shape == (3, 2)
    # thread count must not perturb a single bit of the result
    assert np.array_equal(serial.values, threaded.values)


def test_spectrum_rows_schema():
    p = LadderParams(j_amp=2.0, eta_a=0.8, eta_b=-0.8, delta=0.5, n_cells=4)
    rows = spectrum_rows(p)
    assert len(rows) == 8
    assert all(len(r) == 10 for r in rows)
    index, re_e, im_e, label, state_ipr, imb = rows[0][:6]
    assert index == 0 and isinstance(label, str)
    assert all(isinstance(x, float) for x in (re_e, im_e, state_ipr, imb))
    # the four factor-modulus columns drop to blanks on a ring
    ring = spectrum_rows(p.replace(boundary=Boundary.PERIODIC))
    assert all(r[6:] == ("", "", "", "") for r in ring)


def test_gbz_rows_open_chain_only():
    p = LadderParams(j_amp=2.0, eta_a=0.8, eta_b=-0.8, delta=0.5, n_cells=4)
    rows = gbz_rows(p)
    assert len(rows) == 8 and len(rows[0]) == 8
    with pytest.raises(ConfigError, match="open"):
        gbz_rows(p.replace(boundary=Boundary.PERIODIC))


def test_mode_rows_pair_summary_with_profiles():
    p = LadderParams(j_amp=2.0, eta_a=0.8, eta_b=-0.8, delta=0.5, n_cells=17)
    summary, profiles = mode_rows(p)
    assert [r[0] for r in summary] == ["zero_odd_exact", "zero_odd_exact"]
    assert len(profiles) == 2 * p.n_cells
    assert profiles[0][:2] == (0, 1)


def test_format_value_round_trip_stability():
    assert [format_value(x) for x in (1.0, -1.0, 0.625, 1e-17)] == ["1", "-1", "0.625", "1e-17"]
    assert format_value(-5.851129505234558) == "-5.85112950523"
    assert format_value("label") == "label"
    assert format_value(7) == "7"


# ---------------------------------------------------------------- CLI


def test_cli_spectrum_artifacts_are_deterministic(tmp_path):
    cfg = _write_yaml(tmp_path / "point.yaml",
                      dict(j_amp=2.0, eta=0.8, eta_lock="antisymmetric",
                           delta=0.5, n_cells=17))
    first = _cli("spectrum", "--config", cfg, "--out", str(tmp_path / "one"))
    assert first.returncode == 0
    csv_one = (tmp_path / "one" / "spectrum.csv").read_text()
    header = csv_one.splitlines()[0]
    assert header == ("index,re_E,im_E,class,ipr,imbalance,"
                      "abs_beta1,abs_beta2,abs_beta3,abs_beta4")
    meta = json.loads((tmp_path / "one" / "spectrum_meta.json").read_text())
    assert meta["config"]["params"]["j_amp"] == 2.0
    assert meta["command"] == "spectrum"
    assert "created" in meta
    assert meta["files"] == ["spectrum.csv"]
    second = _cli("spectrum", "--config", cfg, "--out", str(tmp_path / "two"))
    assert second.returncode == 0
    # per-run state (timestamps) belongs to the metadata file only
    assert (tmp_path / "two" / "spectrum.csv").read_text() == csv_one


def test_cli_phase_scan_values(tmp_path):
    cfg = _write_yaml(tmp_path / "scan.yaml", SCAN)
    run = _cli("phase", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 0
    got = (tmp_path / "out" / "phase_awn.csv").read_text().splitlines()
    assert got == ["axis1,value", "0.2,-1", "0.8,-0.625", "1.4,-0.25"]


def test_cli_diagnose_report(tmp_path):
    cfg = _write_yaml(tmp_path / "point.yaml",
                      dict(j_amp=2.0, eta=0.8, eta_lock="antisymmetric",
                           delta=0.5, n_cells=17))
    run = _cli("diagnose", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 0
    report = json.loads((tmp_path / "out" / "diagnose.json").read_text())
    assert set(report) >= {
        "band_overlap", "exceptional_momenta", "params", "regime",
        "pt_threshold_bisection", "pt_threshold_closed_form",
        "symmetry_residuals", "z2_invariant",
    }
    assert report["regime"]["balanced"] is True
    assert len(report["exceptional_momenta"]) == 4


def test_cli_modes_summary(tmp_path):
    cfg = _write_yaml(tmp_path / "point.yaml",
                      dict(j_amp=2.0, eta=0.8, eta_lock="antisymmetric",
                           delta=0.5, n_cells=17))
    run = _cli("modes", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 0
    lines = (tmp_path / "out" / "modes.csv").read_text().splitlines()
    assert lines[0] == "kind,index,re_E,im_E,residual"
    assert len(lines) == 3
    profile_header = (tmp_path / "out" / "mode_profiles.csv").read_text().splitlines()[0]
    assert profile_header == "mode_index,cell,re_a,im_a,re_b,im_b"


@pytest.mark.parametrize(
    "mapping, fragment",
    [
        (dict(j_amp=2.0, jamp_typo=1.0, eta=0.8, eta_lock="antisymmetric",
              delta=0.5, n_cells=17), "unknown config keys: jamp_typo"),
        (dict(eta=0.8, eta_lock="antisymmetric", delta=0.5, n_cells=17),
         "missing required config keys: j_amp"),
    ],
)
def test_cli_config_errors_exit_one(tmp_path, mapping, fragment):
    cfg = _write_yaml(tmp_path / "bad.yaml", mapping)
    run = _cli("spectrum", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 1
    assert "config error" in run.stderr
    assert fragment in run.stderr


def test_cli_missing_config_file_exits_one(tmp_path):
    run = _cli("spectrum", "--config", str(tmp_path / "nope.yaml"))
    assert run.returncode == 1
    assert "config error" in run.stderr


def test_cli_modes_without_an_applicable_regime(tmp_path):
    cfg = _write_yaml(tmp_path / "point.yaml",
                      dict(j_amp=0.3, eta=0.5, eta_lock="symmetric",
                           delta=0.4, gamma=0.5, n_cells=16))
    run = _cli("modes", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 1
    assert "no boundary-mode construction applies" in run.stderr


def test_cli_modes_numerical_failure_exits_two(tmp_path):
    # forward block singular away from the flat point: eta^2 = 13/16
    cfg = _write_yaml(tmp_path / "point.yaml",
                      dict(j_amp=2.0, eta=0.9013878188659973,
                           eta_lock="antisymmetric", delta=0.5, n_cells=17))
    run = _cli("modes", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 2
    assert "numerical failure" in run.stderr
    assert "singular" in run.stderr


def test_cli_gbz_rejects_rings(tmp_path):
    cfg = _write_yaml(tmp_path / "ring.yaml",
                      dict(j_amp=0.3, eta=0.5, eta_lock="symmetric", delta=0.0,
                           n_cells=16, boundary="periodic"))
    run = _cli("gbz", "--config", cfg, "--out", str(tmp_path / "out"))
    assert run.returncode == 1
    assert "open chains" in run.stderr


def test_cli_argument_misuse_exits_one(tmp_path):
    assert _cli().returncode == 1
    assert _cli("--not-a-flag").returncode == 1
    cfg = _write_yaml(tmp_path / "scan.yaml", SCAN)
    run = _cli("phase", "--config", cfg, "--seedless", "extra")
    assert run.returncode == 1
    assert "unrecognized arguments" in run.stderr


def test_cli_unknown_recipe_lists_the_catalog():
    run = _cli("recipe", "not_a_recipe", "--out", "/tmp/unused")
    assert run.returncode == 1
    assert "unknown recipe" in run.stderr
    assert "fig8b" in run.stderr


def test_cli_recipe_catalog():
    run = _cli("list-recipes")
    assert run.returncode == 0
    lines = [ln for ln in run.stdout.splitlines() if ln.strip()]
    assert len(lines) == 17
    assert lines[0].startswith("fig1b")
