"""Command-line front end.

Commands map one-to-one onto library operations: ``solve`` runs one model,
``sweep`` repeats it over a q^2 list, ``qcr`` bisects for the critical
coupling, ``char-roots``/``q0`` query the characteristic equations,
``compare`` builds the smoothed physical fields of both fermionic models,
``large-q`` runs the oscillator-limit comparison and ``deviation`` the
half-axis convergence profile.

Every command writes its artifacts plus a ``manifest.json`` naming the
produced files and the fully resolved configuration into ``--out``.  Flag
defaults may come from a flat ``key=value`` config file (``--config``);
explicit flags win.  Exit codes: 0 success, 1 solver failure (named in
``error.json``/``report.json``), 2 usage error.  Reports contain no
timestamps, so identical invocations produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import asymptotics, physical, regime, spectral
from .grids import Field, SeedKind, make_grid, write_field_csv
from .solvers import (
    IterationConfig,
    Model,
    SolveReport,
    Termination,
    solve_ferm1,
    solve_ferm2,
    solve_padic,
    solve_padic_half,
)

__all__ = ["run", "entry"]

_DEFAULTS = {
    "grid": "-10,10,2001",
    "half_grid": "-10,0,1001",
    "q2": 0.0,
    "max_steps": 2000,
    "step_tol": 1e-9,
    "window": 10.0,
    "seed": "step",
    "record_every": 500,
    "bisections": 6,
    "jobs": 1,
}

_SOLVERS = {
    Model.PADIC: solve_padic,
    Model.PADIC_HALF: solve_padic_half,
    Model.FERM1: solve_ferm1,
}

_FAILURES = (Termination.NEGATIVE_SQRT, Termination.NON_FINITE)


class UsageError(Exception):
    pass


def _parse_grid(text: str):
    try:
        t_min, t_max, n = text.split(",")
        return make_grid(float(t_min), float(t_max), int(n))
    except ValueError as exc:
        raise UsageError(f"bad --grid {text!r}: {exc}") from exc


def _parse_q2_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"bad --q2 list {text!r}") from exc


def _load_config_file(path: str) -> dict:
    values = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected key=value")
        key, val = line.split("=", 1)
        values[key.strip().replace("-", "_")] = val.strip()
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """flags > config file > built-in defaults."""
    file_vals = _load_config_file(args.config) if args.config else {}
    out = {}
    for key, builtin in _DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in file_vals:
            out[key] = type(builtin)(file_vals[key])
        else:
            out[key] = builtin
    for key in ("model", "bracket", "out", "guess"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    out["command"] = args.command
    return out


def _iteration_config(cfg: dict, grid_key: str = "grid") -> IterationConfig:
    grid = _parse_grid(cfg[grid_key])
    try:
        seed = SeedKind(cfg["seed"])
    except ValueError as exc:
        raise UsageError(f"unknown seed {cfg['seed']!r}") from exc
    try:
        return IterationConfig(
            grid=grid,
            max_steps=int(cfg["max_steps"]),
            step_tol=float(cfg["step_tol"]),
            window=float(cfg["window"]),
            q_squared=float(cfg["q2"]) if not isinstance(cfg["q2"], str) else 0.0,
            seed=seed,
            record_every=int(cfg["record_every"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _manifest(out_dir: Path, command: str, cfg: dict, files: list[str]) -> None:
    resolved = {
        k: v for k, v in cfg.items() if isinstance(v, (str, int, float, bool, type(None)))
    }
    _write_json(
        out_dir / "manifest.json",
        {"command": command, "config": resolved, "files": sorted(files + ["manifest.json"])},
    )


def _report_payload(report: SolveReport, final_csv: str) -> dict:
    grid = report.config.grid
    return {
        "model": report.model.value,
        "q_squared": report.config.q_squared,
        "grid": {"t_min": grid.t_min, "t_max": grid.t_max, "n_points": grid.n_points},
        "steps_taken": report.steps_taken,
        "terminated_by": report.terminated_by.value,
        "residual": report.residual if math.isfinite(report.residual) else None,
        "step_diffs": list(report.step_diffs),
        "final_csv_path": final_csv,
    }


def _run_one_solve(cfg: dict, out_dir: Path) -> int:
    model = Model(cfg["model"])
    grid_key = "half_grid" if model is Model.PADIC_HALF else "grid"
    if grid_key == "half_grid" and cfg["grid"] != _DEFAULTS["grid"]:
        grid_key = "grid"  # explicit --grid wins for the half-axis model too
    icfg = _iteration_config(cfg, grid_key)
    icfg = replace(icfg, q_squared=float(cfg["q2"]))
    files = []
    if model is Model.FERM2:
        report, state = solve_ferm2(icfg)
        write_field_csv(state.sigma, out_dir / "sigma.csv")
        files.append("sigma.csv")
    else:
        report = _SOLVERS[model](icfg)
    write_field_csv(report.final, out_dir / "final.csv")
    files.append("final.csv")
    _write_json(out_dir / "report.json", _report_payload(report, "final.csv"))
    files.append("report.json")
    _manifest(out_dir, "solve", cfg, files)
    if report.terminated_by in _FAILURES:
        print(f"solve failed: {report.terminated_by.value}", file=sys.stderr)
        return 1
    print(
        f"{model.value}: {report.terminated_by.value} after {report.steps_taken} steps, "
        f"residual {report.residual:.3e}"
    )
    return 0


def _sweep_probe(payload):
    cfg, q2, out_sub = payload
    sub = Path(out_sub)
    sub.mkdir(parents=True, exist_ok=True)
    probe_cfg = dict(cfg, q2=q2, out=str(sub))
    code = _run_one_solve(probe_cfg, sub)
    return q2, code


def _run_sweep(cfg: dict, out_dir: Path) -> int:
    q2s = _parse_q2_list(str(cfg["q2"]))
    if not q2s:
        raise UsageError("sweep needs --q2 with a comma-separated list")
    jobs = max(1, int(cfg["jobs"]))
    payloads = [
        (cfg, q2, str(out_dir / f"probe_{i:03d}_q2_{q2:g}")) for i, q2 in enumerate(q2s)
    ]
    if jobs == 1:
        results = [_sweep_probe(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_probe, payloads))
    summary = {
        "probes": [
            {"q_squared": q2, "exit_code": code, "dir": f"probe_{i:03d}_q2_{q2:g}"}
            for i, (q2, code) in enumerate(results)
        ]
    }
    _write_json(out_dir / "sweep.json", summary)
    _manifest(out_dir, "sweep", cfg, ["sweep.json"] + [p["dir"] for p in summary["probes"]])
    return 0 if all(code == 0 for _, code in results) else 1


def _run_qcr(cfg: dict, out_dir: Path) -> int:
    model = Model(cfg["model"])
    bracket = cfg.get("bracket") or ("1.0,1.8" if model is Model.FERM1 else "1.5,3.0")
    try:
        lo, hi = (float(v) for v in bracket.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --bracket {bracket!r}") from exc
    budget = _iteration_config(cfg)
    probes: list = []
    qcr = regime.find_qcr(
        model, lo, hi, budget, int(cfg["bisections"]), probe_log=probes
    )
    payload = {
        "model": model.value,
        "bracket": [lo, hi],
        "bisections": int(cfg["bisections"]),
        "budget_steps": budget.max_steps,
        "q_squared_critical": qcr,
        "probes": probes,
    }
    _write_json(out_dir / "qcr.json", payload)
    _manifest(out_dir, "qcr", cfg, ["qcr.json"])
    print(f"critical q^2 ({model.value}) ~= {qcr:.4f}")
    return 0


def _run_char_roots(cfg: dict, out_dir: Path) -> int:
    model = spectral.CharModel(cfg["model"])
    q2s = _parse_q2_list(str(cfg["q2"])) or [0.0]
    roots = []
    for q2 in q2s:
        if cfg.get("guess"):
            re, im = (float(v) for v in cfg["guess"].split(","))
            root = spectral.find_omega(model, q2, complex(re, im))
        else:
            root = spectral.continue_root(model, q2)
        roots.append(
            {
                "model": model.value,
                "q_squared": q2,
                "omega_re": root.omega_re,
                "omega_im": root.omega_im,
                "residual_abs": root.residual_abs,
            }
        )
    _write_json(out_dir / "roots.json", {"roots": roots})
    _manifest(out_dir, "char-roots", cfg, ["roots.json"])
    for r in roots:
        print(
            f"q^2={r['q_squared']:g}: Omega = {r['omega_re']:.6f} + {r['omega_im']:.6f}i"
        )
    return 0


def _run_q0(cfg: dict, out_dir: Path) -> int:
    model = spectral.CharModel(cfg["model"])
    q0, omega0 = spectral.find_q0(model)
    payload = {"model": model.value, "q0_squared": q0, "omega0": omega0}
    _write_json(out_dir / "q0.json", payload)
    _manifest(out_dir, "q0", cfg, ["q0.json"])
    print(f"q0^2 ({model.value}) = {q0:.6f} at Omega = {omega0:.6f}")
    return 0


def _run_compare(cfg: dict, out_dir: Path) -> int:
    icfg = _iteration_config(cfg)
    q2 = float(cfg["q2"]) if cfg["q2"] != 0.0 else physical.q_squared_string()
    psi_exact, psi_approx, gap = physical.compare_models(q2, icfg)
    write_field_csv(psi_exact, out_dir / "psi_exact.csv")
    write_field_csv(psi_approx, out_dir / "psi_approx.csv")
    _write_json(
        out_dir / "compare.json",
        {"q_squared": q2, "sup_gap": gap},
    )
    _manifest(
        out_dir, "compare", cfg, ["psi_exact.csv", "psi_approx.csv", "compare.json"]
    )
    print(f"sup gap between smoothed fields at q^2={q2:.4f}: {gap:.5f}")
    return 0


def _run_large_q(cfg: dict, out_dir: Path) -> int:
    icfg = _iteration_config(cfg)
    q2 = float(cfg["q2"]) if cfg["q2"] != 0.0 else 25.0
    report, orbit, mismatch = asymptotics.large_q_comparison(q2, icfg)
    traj = orbit.trajectory
    lines = ["t,chi,dchi,energy"]
    lines += [
        f"{t:.17g},{c:.17g},{v:.17g},{e:.17g}"
        for t, c, v, e in zip(
            traj.grid.nodes, traj.values, orbit.velocity, orbit.energy_series
        )
    ]
    (out_dir / "orbit.csv").write_text("\n".join(lines) + "\n")
    write_field_csv(report.final, out_dir / "final.csv")
    _write_json(
        out_dir / "largeq.json",
        {
            "q_squared": q2,
            "period_mismatch": mismatch,
            "orbit_period": orbit.period,
            "orbit_amplitude": orbit.amplitude,
            "steps_taken": report.steps_taken,
        },
    )
    _manifest(out_dir, "large-q", cfg, ["orbit.csv", "final.csv", "largeq.json"])
    print(f"period mismatch at q^2={q2:g}: {mismatch:.4f}")
    return 0


def _run_deviation(cfg: dict, out_dir: Path) -> int:
    grid_key = "half_grid" if cfg["grid"] == _DEFAULTS["grid"] else "grid"
    icfg = _iteration_config(cfg, grid_key)
    prof = regime.deviation_profile(icfg)
    write_field_csv(prof.delta, out_dir / "delta.csv")
    _write_json(out_dir / "deviation.json", {"delta_max": prof.delta_max})
    _manifest(out_dir, "deviation", cfg, ["delta.csv", "deviation.json"])
    print(f"delta_max = {prof.delta_max:.6f}")
    return 0


_COMMANDS = {
    "solve": _run_one_solve,
    "sweep": _run_sweep,
    "qcr": _run_qcr,
    "char-roots": _run_char_roots,
    "q0": _run_q0,
    "compare": _run_compare,
    "large-q": _run_large_q,
    "deviation": _run_deviation,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", help="t_min,t_max,n_points (default -10,10,2001)")
    p.add_argument("--q2", help="q^2 value (comma list for sweep/char-roots)")
    p.add_argument("--max-steps", dest="max_steps", type=int)
    p.add_argument("--step-tol", dest="step_tol", type=float)
    p.add_argument("--window", type=float)
    p.add_argument("--seed", choices=[k.value for k in SeedKind])
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--config", help="flat key=value defaults file")
    p.add_argument("--out", required=True, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stringkink",
        description="Solvers for nonlinear Gaussian-convolution integral equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="run one fixed-point solve")
    p.add_argument("--model", required=True, choices=[m.value for m in Model])
    _add_common(p)
    p = sub.add_parser("sweep", help="repeat a solve over a q^2 list")
    p.add_argument("--model", default="ferm1", choices=[m.value for m in Model])
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p = sub.add_parser("qcr", help="bisect for the critical coupling")
    p.add_argument("--model", default="ferm1", choices=["ferm1", "ferm2"])
    p.add_argument("--bracket", help="lo,hi bracket for q^2")
    p.add_argument("--bisections", type=int)
    _add_common(p)
    p = sub.add_parser("char-roots", help="characteristic-equation roots")
    p.add_argument("--model", default="ferm1", choices=["ferm1", "ferm2"])
    p.add_argument("--guess", help="re,im Newton start (default: continuation)")
    _add_common(p)
    p = sub.add_parser("q0", help="real-root threshold of the characteristic equation")
    p.add_argument("--model", default="ferm1", choices=["ferm1", "ferm2"])
    _add_common(p)
    p = sub.add_parser("compare", help="smoothed physical fields, system vs single")
    _add_common(p)
    p = sub.add_parser("large-q", help="oscillator-limit period comparison")
    _add_common(p)
    p = sub.add_parser("deviation", help="half-axis two-iterate deviation profile")
    _add_common(p)
    return parser


def _normalize_argv(argv):
    """Join ``--flag -10,10,2001`` into ``--flag=-10,10,2001`` so argparse
    does not mistake leading-dash values for options."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and len(argv[i + 1]) > 1
            and argv[i + 1][0] == "-"
            and (argv[i + 1][1].isdigit() or argv[i + 1][1] == ".")
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_normalize_argv(list(argv)))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    out_dir = Path(args.out)
    try:
        cfg = _resolve(args)
        # sweep and char-roots accept a comma list in --q2; everyone else a scalar
        if cfg["command"] not in ("sweep", "char-roots") and isinstance(cfg["q2"], str):
            try:
                cfg["q2"] = float(cfg["q2"])
            except ValueError as exc:
                raise UsageError(f"bad --q2 {cfg['q2']!r}") from exc
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[cfg["command"]](cfg, out_dir)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # solver-level failure: machine-readable diagnosis
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(
            out_dir / "error.json",
            {"error": type(exc).__name__, "message": str(exc)},
        )
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(run())
