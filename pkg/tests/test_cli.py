import csv
import json

import numpy as np
import pytest

from qgtsim.cli import main

A = 2 * np.pi * 20e6


def run(tmp_path, command, config, name, extra_args=()):
    cfg_path = tmp_path / f"{name}.json"
    cfg_path.write_text(json.dumps(config))
    out_dir = tmp_path / name
    code = main([command, "--config", str(cfg_path), "--out", str(out_dir),
                 *extra_args])
    return code, out_dir


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_unknown_top_level_key_is_config_error(tmp_path):
    code, _ = run(tmp_path, "analytic", {"schema_version": 1, "bogus": {}}, "a")
    assert code == 2


def test_unknown_section_key_is_config_error(tmp_path):
    cfg = {"schema_version": 1, "analytic": {"n_theta": 5, "oops": 1}}
    code, _ = run(tmp_path, "analytic", cfg, "b")
    assert code == 2


def test_wrong_schema_version_rejected(tmp_path):
    code, _ = run(tmp_path, "analytic", {"schema_version": 2}, "c")
    assert code == 2


def test_analytic_r_zero_curvature_column(tmp_path):
    cfg = {"schema_version": 1, "analytic": {"n_theta": 31, "r_values": [0.0]}}
    code, out = run(tmp_path, "analytic", cfg, "analytic0")
    assert code == 0
    rows = read_csv(out / "analytic.csv")
    assert len(rows) == 31
    for row in rows:
        theta = float(row["theta_rad"])
        assert float(row["f_tp"]) == pytest.approx(np.sin(theta) / 2, abs=1e-12)
        assert float(row["g_tt"]) == pytest.approx(0.25, abs=1e-12)


def test_analytic_matches_library_and_flags_degeneracy(tmp_path):
    from qgtsim.model import analytic_qgt
    thetas = [0.3, np.pi / 2, np.pi]
    cfg = {"schema_version": 1,
           "analytic": {"theta_grid_rad": thetas, "r_values": [0.5, 1.0]}}
    code, out = run(tmp_path, "analytic", cfg, "analytic1")
    assert code == 0
    rows = read_csv(out / "analytic.csv")
    flagged = [r for r in rows if r["status"] == "degenerate"]
    assert len(flagged) == 1
    assert float(flagged[0]["r"]) == 1.0
    assert flagged[0]["g_tt"] == ""
    for row in rows:
        if row["status"] != "ok":
            continue
        g = analytic_qgt(float(row["theta_rad"]), float(row["r"]))
        assert float(row["g_pp"]) == g.g_pp  # byte-exact round trip
    side = json.loads((out / "analytic.json").read_text())
    assert side["n_degenerate"] == 1
    assert side["warnings"]


def test_sweep_dip_near_resonance(tmp_path):
    cfg = {
        "schema_version": 1,
        "physics": {"theta0_rad": 5 * np.pi / 6},
        "experiment": {"t_probe_s": 400e-9},
        "modulation": {"kind": "linear", "a_theta": 0.1, "a_phi": 0.0},
        "sweep": {"omega_min_over_res": 0.9, "omega_max_over_res": 1.1,
                  "n_points": 41},
    }
    code, out = run(tmp_path, "sweep", cfg, "sweep")
    assert code == 0
    side = json.loads((out / "sweep.json").read_text())
    assert abs(side["dip_omega_rad_s"] / side["predicted_resonance_rad_s"] - 1) < 0.01


def test_rabi_fit_in_sidecar(tmp_path):
    cfg = {
        "schema_version": 1,
        "physics": {"theta0_rad": np.pi / 2},
        "modulation": {"kind": "linear", "a_theta": 0.0, "a_phi": 0.08},
        "rabi": {"n_periods": 3.0, "n_points": 64},
    }
    code, out = run(tmp_path, "rabi", cfg, "rabi")
    assert code == 0
    side = json.loads((out / "rabi.json").read_text())
    ratio = side["fit"]["omega_rabi_over_res"]
    assert ratio == pytest.approx(0.04, abs=0.001)
    rows = read_csv(out / "rabi.csv")
    assert len(rows) == 64
    assert float(rows[0]["p0"]) <= 1.0


def test_qgt_command_with_theory_overlay(tmp_path):
    cfg = {
        "schema_version": 1,
        "qgt": {"theta0_grid_rad": [np.pi / 3], "a_theta": 0.1, "a_phi": 0.1},
    }
    code, out = run(tmp_path, "qgt", cfg, "qgt")
    assert code == 0
    row = read_csv(out / "qgt.csv")[0]
    assert float(row["g_tt"]) == pytest.approx(0.25, abs=0.01)
    assert float(row["f_tp"]) == pytest.approx(float(row["f_tp_theory"]), abs=0.01)
    assert float(row["g_pp_theory"]) == pytest.approx(np.sin(np.pi / 3) ** 2 / 4,
                                                      rel=1e-12)
    assert float(row["omega_res_refined_rad_s"]) > 0


def test_chern_command_trivial_phase(tmp_path):
    cfg = {
        "schema_version": 1,
        "chern": {"r": 1.5, "n_interior": 9, "a_theta": 0.1, "a_phi": 0.1,
                  "refine": False},
    }
    code, out = run(tmp_path, "chern", cfg, "chern")
    assert code == 0
    side = json.loads((out / "chern.json").read_text())
    assert abs(side["chern_curvature"]) < 0.05
    assert side["quadrature"]["rule"] == "composite-simpson"
    assert side["quadrature"]["n_points"] == 11


def test_floquet_command_theory_columns(tmp_path):
    cfg = {
        "schema_version": 1,
        "floquet": {"theta0_grid_rad": [np.pi / 6, np.pi / 2],
                    "a_theta": 0.1, "a_phi": 0.1},
    }
    code, out = run(tmp_path, "floquet", cfg, "floquet")
    assert code == 0
    rows = read_csv(out / "floquet.csv")
    r0 = rows[1]  # theta0 = pi/2
    assert float(r0["rabi_elliptical_minus"]) < 1e-4 * A
    assert float(r0["rabi_elliptical_plus"]) == pytest.approx(0.1 * A, rel=5e-3)
    assert float(r0["rabi_theta_only"]) == pytest.approx(0.05 * A, rel=5e-3)


def test_verify_prep_command(tmp_path):
    base = {
        "schema_version": 1,
        "physics": {"theta0_rad": 2.0},
        "verify_prep": {"duration_s": 1e-6, "n_samples": 64},
    }
    code, out = run(tmp_path, "verify-prep", base, "vp0")
    assert code == 0
    side = json.loads((out / "verify_prep.json").read_text())
    assert side["min_p_g"] >= 0.9999
    off = dict(base)
    off["verify_prep"] = dict(base["verify_prep"], theta_offset_rad=0.2)
    code, out = run(tmp_path, "verify-prep", off, "vp1")
    side = json.loads((out / "verify_prep.json").read_text())
    assert side["contrast"] > 0.005


def test_outputs_byte_identical_across_runs_and_threads(tmp_path):
    cfg = {
        "schema_version": 1,
        "physics": {"theta0_rad": np.pi / 2},
        "experiment": {"seed": 9, "shots": 1000},
        "modulation": {"kind": "linear", "a_theta": 0.1, "a_phi": 0.0},
        "sweep": {"omega_min_over_res": 0.95, "omega_max_over_res": 1.05,
                  "n_points": 11},
    }
    _, out1 = run(tmp_path, "sweep", cfg, "det1")
    _, out2 = run(tmp_path, "sweep", cfg, "det2")
    _, out3 = run(tmp_path, "sweep", cfg, "det3", extra_args=["--threads", "4"])
    data1 = (out1 / "sweep.csv").read_bytes()
    assert data1 == (out2 / "sweep.csv").read_bytes()
    assert data1 == (out3 / "sweep.csv").read_bytes()

    def sidecar_without_volatile(path):
        doc = json.loads(path.read_text())
        doc.pop("wall_time_s")
        doc.pop("config")
        return doc

    s1 = sidecar_without_volatile(out1 / "sweep.json")
    s3 = json.loads((out3 / "sweep.json").read_text())
    s3.pop("wall_time_s")
    cfg3 = s3.pop("config")
    assert s1 == s3
    assert cfg3["sweep"]["n_points"] == 11


def test_seed_flag_overrides_config(tmp_path):
    cfg = {
        "schema_version": 1,
        "physics": {"theta0_rad": np.pi / 2},
        "experiment": {"seed": 1, "shots": 500},
        "modulation": {"kind": "linear", "a_theta": 0.1, "a_phi": 0.0},
        "sweep": {"omega_min_over_res": 0.98, "omega_max_over_res": 1.02,
                  "n_points": 5},
    }
    _, out1 = run(tmp_path, "sweep", cfg, "seed1")
    _, out2 = run(tmp_path, "sweep", cfg, "seed2", extra_args=["--seed", "2"])
    side2 = json.loads((out2 / "sweep.json").read_text())
    assert side2["seed"] == 2
    assert (out1 / "sweep.csv").read_bytes() != (out2 / "sweep.csv").read_bytes()


def test_missing_config_file_is_config_error(tmp_path):
    code = main(["analytic", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")])
    assert code == 2


def test_rabi_command_in_lab_frame(tmp_path):
    cfg = {
        "schema_version": 1,
        "physics": {"theta0_rad": np.pi / 2},
        "modulation": {"kind": "linear", "a_theta": 0.0, "a_phi": 0.08},
        "rabi": {"n_periods": 2.0, "n_points": 32},
    }
    code, out = run(tmp_path, "rabi", cfg, "rabi_lab",
                    extra_args=["--frame", "lab"])
    assert code == 0
    side = json.loads((out / "rabi.json").read_text())
    assert side["config"]["modulation"]["a_phi"] == 0.08
    assert side["fit"]["omega_rabi_over_res"] == pytest.approx(0.04, abs=0.001)
