"""Command-line front end: JSON-configured runs that emit CSV datasets plus
JSON sidecars with full reproducibility metadata.

Commands: analytic, sweep, rabi, qgt, chern, floquet, verify-prep.
Exit codes: 0 success (warnings allowed), 2 config error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .defaults import A_DEFAULT, OMEGA0_DEFAULT
from .drive import ModulationSpec
from .errors import ConfigError, InvalidInputError, QgtSimError, SingularityError
from .experiment import ExperimentConfig, rabi_experiment, resonance_sweep, verify_preparation
from .extract import (fit_rabi, interior_theta_grid, measure_qgt,
                      padded_curvature_grid, padded_metric_grid,
                      curvature_scan, qgt_scan)
from .floquet import (elliptical_rabi_first_order, linear_rabi_first_order,
                      predict_rabi, predict_resonance)
from .model import (StaticParams, analytic_qgt, chern_from_curvature,
                    chern_from_metric, eigenstate_angle, gap_frequency)
from .experiment import prepare_state
from .su2 import state

SCHEMA_VERSION = 1

# every known config key, per section; unknown keys are rejected outright
_SCHEMA = {
    "schema_version": None,
    "physics": {"amplitude_rad_s", "omega0_rad_s", "theta0_rad", "phi0_rad", "r"},
    "experiment": {"frame", "shots", "seed", "t_probe_s", "threads"},
    "modulation": {"kind", "a_theta", "a_phi", "omega_rad_s"},
    "analytic": {"theta_grid_rad", "n_theta", "r_values"},
    "sweep": {"omega_min_over_res", "omega_max_over_res", "n_points"},
    "rabi": {"n_periods", "n_points"},
    "qgt": {"theta0_grid_rad", "a_theta", "a_phi", "refine", "n_periods", "n_points"},
    "chern": {"r", "n_interior", "a_theta", "a_phi", "with_metric", "refine",
              "n_periods", "n_points"},
    "floquet": {"theta0_grid_rad", "a_theta", "a_phi"},
    "verify_prep": {"duration_s", "n_samples", "theta_offset_rad"},
}


def load_config(path):
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(_SCHEMA)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}")
    for section, allowed in _SCHEMA.items():
        if allowed is None or section not in raw:
            continue
        block = raw[section]
        if not isinstance(block, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        bad = set(block) - allowed
        if bad:
            raise ConfigError(f"unknown keys in {section!r}: {sorted(bad)}")
    return raw


def _physics(cfg):
    block = cfg.get("physics", {})
    a = float(block.get("amplitude_rad_s", A_DEFAULT))
    omega0 = float(block.get("omega0_rad_s", OMEGA0_DEFAULT))
    theta0 = float(block.get("theta0_rad", np.pi / 2))
    phi0 = float(block.get("phi0_rad", 0.0))
    r = float(block.get("r", 0.0))
    return a, omega0, theta0, phi0, r


def _experiment(cfg, args):
    block = dict(cfg.get("experiment", {}))
    if args.seed is not None:
        block["seed"] = args.seed
    if args.frame is not None:
        block["frame"] = args.frame
    if args.threads is not None:
        block["threads"] = args.threads
    return {
        "frame": block.get("frame", "effective"),
        "shots": block.get("shots"),
        "seed": int(block.get("seed", 0)),
        "t_probe_s": float(block.get("t_probe_s", 400e-9)),
        "threads": int(block.get("threads", 1)),
    }


def _fmt(value):
    """Full round-trip text for CSV cells (shortest exact float form)."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_sidecar(path, command, cfg, exp, extra, wall_time, caught):
    doc = {
        "command": command,
        "tool_version": __version__,
        "config": cfg,
        "seed": exp["seed"] if exp else None,
        "wall_time_s": wall_time,
        "warnings": [str(w.message) for w in caught],
    }
    doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_analytic(cfg, exp, out_dir):
    a, _omega0, _th, _ph, _r = _physics(cfg)
    block = cfg.get("analytic", {})
    if "theta_grid_rad" in block:
        thetas = [float(t) for t in block["theta_grid_rad"]]
    else:
        thetas = list(np.linspace(0.0, np.pi, int(block.get("n_theta", 61))))
    r_values = [float(r) for r in block.get("r_values", [0.0])]
    rows = []
    n_degenerate = 0
    for r in r_values:
        for theta in thetas:
            try:
                g = analytic_qgt(theta, r)
                gap = gap_frequency(theta, r, a)
                tp = eigenstate_angle(theta, r)
                rows.append([theta, r, g.g_tt, g.g_pp, g.g_tp, g.f_tp,
                             gap, gap / (2 * np.pi), tp, "ok"])
            except SingularityError:
                n_degenerate += 1
                rows.append([theta, r, None, None, None, None, None, None,
                             None, "degenerate"])
    header = ["theta_rad", "r", "g_tt", "g_pp", "g_tp", "f_tp",
              "gap_rad_s", "gap_hz", "theta_prime_rad", "status"]
    write_csv(out_dir / "analytic.csv", header, rows)
    extra = {"n_rows": len(rows), "n_degenerate": n_degenerate}
    if n_degenerate:
        warnings.warn(f"{n_degenerate} grid point(s) at the spectral degeneracy "
                      "were flagged and skipped")
    return extra


def _spec_from_config(cfg, theta0, phi0, omega):
    block = cfg.get("modulation", {})
    return ModulationSpec(kind=block.get("kind", "linear"),
                          a_theta=float(block.get("a_theta", 0.1)),
                          a_phi=float(block.get("a_phi", 0.0)),
                          omega=omega, theta0=theta0, phi0=phi0)


def cmd_sweep(cfg, exp, out_dir):
    a, omega0, theta0, phi0, r = _physics(cfg)
    params = StaticParams(A=a, theta0=theta0, phi0=phi0, r=r)
    block = cfg.get("sweep", {})
    spec = _spec_from_config(cfg, theta0, phi0, a)
    omega_res = predict_resonance(spec, params)
    lo = float(block.get("omega_min_over_res", 0.9))
    hi = float(block.get("omega_max_over_res", 1.1))
    n = int(block.get("n_points", 41))
    grid = omega_res * np.linspace(lo, hi, n)
    run_cfg = ExperimentConfig(params=params, spec=spec, frame=exp["frame"],
                               omega0=omega0, T_probe=exp["t_probe_s"],
                               shots=exp["shots"], seed=exp["seed"])
    scan = resonance_sweep(run_cfg, grid, threads=exp["threads"])
    rows = [[w, w / (2 * np.pi), w / omega_res, p]
            for w, p in zip(scan.omega_grid, scan.p0)]
    write_csv(out_dir / "sweep.csv",
              ["omega_rad_s", "omega_hz", "omega_over_res", "p0"], rows)
    dip = float(scan.omega_grid[int(np.argmin(scan.p0))])
    return {"predicted_resonance_rad_s": omega_res, "dip_omega_rad_s": dip}


def cmd_rabi(cfg, exp, out_dir):
    a, omega0, theta0, phi0, r = _physics(cfg)
    params = StaticParams(A=a, theta0=theta0, phi0=phi0, r=r)
    block = cfg.get("rabi", {})
    spec = _spec_from_config(cfg, theta0, phi0, a)
    omega_res = predict_resonance(spec, params)
    mod_block = cfg.get("modulation", {})
    if mod_block.get("omega_rad_s") is not None:
        omega_res = float(mod_block["omega_rad_s"])
    hint = predict_rabi(spec, params)
    if hint <= 0:
        raise InvalidInputError("modulation drives no transition; nothing to trace")
    n_periods = float(block.get("n_periods", 3.0))
    n_points = int(block.get("n_points", 64))
    span = n_periods * 2 * np.pi / hint
    t_grid = np.linspace(span / n_points, span, n_points)
    run_cfg = ExperimentConfig(params=params, spec=spec, frame=exp["frame"],
                               omega0=omega0, T_probe=exp["t_probe_s"],
                               shots=exp["shots"], seed=exp["seed"])
    trace = rabi_experiment(run_cfg, omega_res, t_grid)
    write_csv(out_dir / "rabi.csv", ["t_s", "p0"],
              [[t, p] for t, p in zip(trace.times, trace.p0)])
    fit = fit_rabi(trace)
    return {
        "drive_omega_rad_s": omega_res,
        "predicted_rabi_rad_s": hint,
        "fit": {
            "omega_rabi_rad_s": fit.omega_rabi,
            "omega_rabi_hz": fit.omega_rabi / (2 * np.pi),
            "omega_rabi_over_res": fit.omega_rabi / omega_res,
            "contrast": fit.contrast,
            "offset": fit.offset,
            "rms_residual": fit.rms_residual,
            "sigma_omega_rad_s": fit.sigma_omega,
        },
    }


def cmd_qgt(cfg, exp, out_dir):
    a, omega0, theta0, phi0, r = _physics(cfg)
    block = cfg.get("qgt", {})
    grid = [float(t) for t in block.get("theta0_grid_rad", [theta0])]
    a_t = float(block.get("a_theta", 0.1))
    a_p = float(block.get("a_phi", 0.1))
    refine = bool(block.get("refine", True))
    rows, failures = [], []
    for th in grid:
        params = StaticParams(A=a, theta0=th, phi0=phi0, r=r)
        try:
            est = measure_qgt(params, a_t, a_p, frame=exp["frame"],
                              omega0=omega0, shots=exp["shots"], seed=exp["seed"],
                              refine=refine,
                              n_periods=float(block.get("n_periods", 3.0)),
                              n_points=int(block.get("n_points", 64)),
                              threads=exp["threads"])
        except QgtSimError as exc:
            failures.append({"theta0_rad": th, "error": str(exc)})
            continue
        g = analytic_qgt(th, r)
        rows.append([th, r, est.omega_res_predicted, est.omega_res_refined,
                     est.g_tt, est.g_pp, est.g_tp, est.f_tp,
                     est.sigma_g_tt, est.sigma_g_pp, est.sigma_g_tp,
                     est.sigma_f_tp, g.g_tt, g.g_pp, g.g_tp, g.f_tp])
    header = ["theta0_rad", "r", "omega_res_predicted_rad_s",
              "omega_res_refined_rad_s", "g_tt", "g_pp", "g_tp", "f_tp",
              "sigma_g_tt", "sigma_g_pp", "sigma_g_tp", "sigma_f_tp",
              "g_tt_theory", "g_pp_theory", "g_tp_theory", "f_tp_theory"]
    write_csv(out_dir / "qgt.csv", header, rows)
    return {"n_points": len(rows), "failures": failures}


def cmd_chern(cfg, exp, out_dir):
    a, omega0, _theta0, _phi0, _r = _physics(cfg)
    block = cfg.get("chern", {})
    r = float(block.get("r", 0.5))
    n_interior = int(block.get("n_interior", 19))
    a_t = float(block.get("a_theta", 0.1))
    a_p = float(block.get("a_phi", 0.1))
    refine = bool(block.get("refine", True))
    with_metric = bool(block.get("with_metric", False))
    kw = dict(frame=exp["frame"], omega0=omega0, shots=exp["shots"],
              seed=exp["seed"], refine=refine,
              n_periods=float(block.get("n_periods", 3.0)),
              n_points=int(block.get("n_points", 64)), threads=exp["threads"])
    grid = interior_theta_grid(n_interior)
    extra = {"r": r}
    failures = []
    if with_metric:
        ests = qgt_scan(r, grid, a, a_t, a_p, **kw)
        rows = [[th, e.f_tp, analytic_qgt(th, r).f_tp, e.g_tt, e.g_pp, e.g_tp]
                for th, e in zip(grid, ests) if e is not None]
        write_csv(out_dir / "chern.csv",
                  ["theta_rad", "f_tp", "f_tp_theory", "g_tt", "g_pp", "g_tp"], rows)
        if all(e is not None for e in ests):
            th_pad = np.concatenate([[0.0], grid, [np.pi]])
            f_pad = np.concatenate([[0.0], [e.f_tp for e in ests], [0.0]])
            c_curv = chern_from_curvature(th_pad, f_pad)
            c_met = chern_from_metric(*padded_metric_grid(grid, ests))
            extra.update(chern_curvature=c_curv.value, chern_metric=c_met.value,
                         quadrature={"rule": c_curv.rule, "n_points": c_curv.n_points})
    else:
        points = curvature_scan(r, grid, a, a_t, a_p, **kw)
        rows = [[p.theta, p.f_measured, p.f_analytic, p.sigma, p.status]
                for p in points]
        write_csv(out_dir / "chern.csv",
                  ["theta_rad", "f_tp", "f_tp_theory", "sigma_f_tp", "status"], rows)
        failures = [{"theta_rad": p.theta, "status": p.status}
                    for p in points if p.status != "ok"]
        if not failures:
            th_pad, f_pad = padded_curvature_grid(points)
            c_curv = chern_from_curvature(th_pad, f_pad)
            extra.update(chern_curvature=c_curv.value,
                         quadrature={"rule": c_curv.rule, "n_points": c_curv.n_points})
    extra["failures"] = failures
    return extra


def cmd_floquet(cfg, exp, out_dir):
    a, _omega0, theta0, phi0, r = _physics(cfg)
    block = cfg.get("floquet", {})
    grid = [float(t) for t in block.get("theta0_grid_rad",
                                        list(np.linspace(0.1, np.pi - 0.1, 13)))]
    a_t = float(block.get("a_theta", 0.1))
    a_p = float(block.get("a_phi", 0.1))
    rows = []
    for th in grid:
        params = StaticParams(A=a, theta0=th, phi0=phi0, r=r)
        omega_res = gap_frequency(th, r, a)

        def spec(kind, at, ap):
            return ModulationSpec(kind=kind, a_theta=at, a_phi=ap,
                                  omega=omega_res, theta0=th, phi0=phi0)

        rows.append([
            th, r, omega_res, omega_res / (2 * np.pi),
            predict_rabi(spec("linear", a_t, 0.0), params),
            predict_rabi(spec("linear", 0.0, a_p), params),
            predict_rabi(spec("linear", a_t, a_p), params),
            predict_rabi(spec("linear", a_t, -a_p), params),
            predict_rabi(spec("elliptical", a_t, a_p), params),
            predict_rabi(spec("elliptical", a_t, -a_p), params),
            linear_rabi_first_order(a_t, a_p, params),
            elliptical_rabi_first_order(a_t, a_p, params),
        ])
    header = ["theta0_rad", "r", "omega_res_rad_s", "omega_res_hz",
              "rabi_theta_only", "rabi_phi_only", "rabi_linear_plus",
              "rabi_linear_minus", "rabi_elliptical_plus",
              "rabi_elliptical_minus", "rabi_linear_first_order",
              "rabi_elliptical_first_order"]
    write_csv(out_dir / "floquet.csv", header, rows)
    return {"n_points": len(rows)}


def cmd_verify_prep(cfg, exp, out_dir):
    a, _omega0, theta0, phi0, r = _physics(cfg)
    params = StaticParams(A=a, theta0=theta0, phi0=phi0, r=r)
    block = cfg.get("verify_prep", {})
    duration = float(block.get("duration_s", 1e-6))
    n_samples = int(block.get("n_samples", 101))
    offset = float(block.get("theta_offset_rad", 0.0))
    if offset == 0.0:
        psi0 = prepare_state(params)
    else:
        tp = eigenstate_angle(theta0, r) + offset
        psi0 = state(np.cos(tp / 2), np.sin(tp / 2) * np.exp(1j * phi0))
    trace = verify_preparation(psi0, params, duration, n_samples)
    write_csv(out_dir / "verify_prep.csv", ["t_s", "p_g"],
              [[t, p] for t, p in zip(trace.times, trace.p0)])
    return {"theta_offset_rad": offset, "min_p_g": float(np.min(trace.p0)),
            "contrast": float(np.max(trace.p0) - np.min(trace.p0))}


_COMMANDS = {
    "analytic": cmd_analytic,
    "sweep": cmd_sweep,
    "rabi": cmd_rabi,
    "qgt": cmd_qgt,
    "chern": cmd_chern,
    "floquet": cmd_floquet,
    "verify-prep": cmd_verify_prep,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qgtsim",
        description="Quantum-geometry measurement of a driven two-level "
                    "system, simulated end to end.")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="JSON run config (schema v1)")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for grid points")
    parser.add_argument("--frame", choices=["effective", "lab"], default=None,
                        help="override simulation frame")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        exp = _experiment(cfg, args)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        start = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            extra = _COMMANDS[args.command](cfg, exp, out_dir)
        wall = time.perf_counter() - start
        name = args.command.replace("-", "_")
        write_sidecar(out_dir / f"{name}.json", args.command, cfg, exp, extra,
                      wall, caught)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QgtSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
