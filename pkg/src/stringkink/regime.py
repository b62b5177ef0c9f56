"""Regime diagnostics: the half-axis convergence constants, the
interpolating/periodic classifier, and bisection for the critical coupling.

The classifier codifies what the model's figures show.  An interpolating
run settles onto the step profile: the field averages to -+1 over the outer
10% of nodes (0.01 tolerance) and the local extrema of (field + sign(t))
decay toward the edges.  A periodic run keeps order-one oscillation in the
outer half: on each side at least two extrema above the 0.1 amplitude
floor, persisting into the outermost quarter of the grid rather than
decaying -- or it never settles at all (non-decaying step_diffs cycle).
Borderline runs come back Undetermined rather than forcing a label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .grids import Field, Grid, SeedKind, make_grid
from .kernels import KernelKind, KernelSpec, step_convolution, _convolve_values
from .solvers import (
    IterationConfig,
    Model,
    SolveReport,
    Termination,
    solve_ferm1,
    solve_ferm2,
    solve_padic,
)

__all__ = [
    "DeviationProfile",
    "RegimeKind",
    "Regime",
    "deviation_profile",
    "classify",
    "find_qcr",
    "geometric_fit",
]

EDGE_TOLERANCE = 0.01
AMPLITUDE_FLOOR = 0.1
EXTREMUM_NOISE = 1e-6
NEAR_THRESHOLD_WIDTH = 0.05
NEAR_THRESHOLD_STEPS = 20000


@dataclass(frozen=True)
class DeviationProfile:
    """Relative gap (phi1 - phi2)/phi1 of the first two half-axis iterates."""

    delta: Field
    delta_max: float


@dataclass(frozen=True)
class Regime:
    kind: "RegimeKind"
    evidence: str


class RegimeKind(Enum):
    INTERPOLATING = "Interpolating"
    PERIODIC = "Periodic"
    UNDETERMINED = "Undetermined"


def deviation_profile(cfg: IterationConfig) -> DeviationProfile:
    """Run exactly two half-axis iterations from the step seed and return
    delta(t) = (phi1 - phi2)/phi1 on t < 0 (the t = 0 node is 0/0 and excluded)."""
    grid = cfg.grid
    if grid.t_max != 0.0:
        raise ValueError("deviation profile needs a half-axis grid (t_max = 0)")
    spec = KernelSpec(KernelKind.HALF_AXIS, 0.0, cfg.window)
    phi1 = np.cbrt(step_convolution(spec, grid).values)
    phi2 = np.cbrt(_convolve_values(spec, grid, phi1))
    delta = (phi1[:-1] - phi2[:-1]) / phi1[:-1]
    inner = make_grid(grid.t_min, grid.nodes[-2], grid.n_points - 1)
    prof = Field(inner, delta)
    return DeviationProfile(prof, float(np.max(delta)))


def _extrema(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(indices, |values|) of interior local extrema, noise filtered."""
    if len(values) < 3:
        return np.empty(0, dtype=int), np.empty(0)
    curv = np.diff(np.sign(np.diff(values)))
    idx = np.where(curv != 0)[0] + 1
    amps = np.abs(values[idx])
    keep = amps > EXTREMUM_NOISE
    return idx[keep], amps[keep]


def _extremum_amplitudes(values: np.ndarray) -> np.ndarray:
    return _extrema(values)[1]


def _envelope_nonincreasing(amps: np.ndarray) -> bool:
    # 5% slack absorbs quadrature-level wiggle in the decay
    return bool(np.all(amps[1:] <= amps[:-1] * 1.05 + 1e-9))


def classify(report: SolveReport) -> Regime:
    """Label a full-axis solve Interpolating, Periodic, or Undetermined."""
    if report.model not in (Model.PADIC, Model.FERM1):
        raise ValueError("classification applies to padic/ferm1 reports")
    grid = report.final.grid
    t = grid.nodes
    f = report.final.values
    dev = f + np.sign(t)

    n_band = max(1, grid.n_points // 10)
    edge_left = float(np.mean(np.abs(f[:n_band] - 1.0)))
    edge_right = float(np.mean(np.abs(f[-n_band:] + 1.0)))

    right = dev[t > 0]
    left = dev[t < 0][::-1]  # centre -> edge on both sides
    amps_r, amps_l = _extremum_amplitudes(right), _extremum_amplitudes(left)

    diffs = np.asarray(report.step_diffs)
    cycle_median = 0.0
    cycling = False
    if len(diffs) >= 40:
        tail = diffs[-len(diffs) // 4 :]
        prev = diffs[-len(diffs) // 2 : -len(diffs) // 4]
        cycle_median = float(np.median(tail))
        cycling = cycle_median >= 0.5 * float(np.median(prev)) and cycle_median > max(
            1e-6, 1e3 * report.config.step_tol
        )

    def outer_periodic(side: np.ndarray) -> tuple[bool, float]:
        # an oscillation that persists into the outer half: at least two
        # extrema above the amplitude floor there, with the outermost of
        # them in the far half of that region (no decay toward the edge)
        outer = side[len(side) // 2 :]
        idx, amps = _extrema(outer)
        big = idx[amps >= AMPLITUDE_FLOOR]
        persists = len(big) >= 2 and big[-1] >= len(outer) // 2
        return persists, float(np.max(amps, initial=0.0))

    per_r, amp_r = outer_periodic(right)
    per_l, amp_l = outer_periodic(left)

    evidence = (
        f"edge_mean_left={edge_left:.3e} edge_mean_right={edge_right:.3e} "
        f"outer_max_amp={max(amp_r, amp_l):.3e} "
        f"diff_cycle_median={cycle_median:.3e} terminated_by={report.terminated_by.value}"
    )

    if per_r and per_l:
        return Regime(RegimeKind.PERIODIC, evidence)
    if cycling and report.terminated_by is Termination.MAX_STEPS:
        return Regime(RegimeKind.PERIODIC, evidence)
    interp_edges = edge_left < EDGE_TOLERANCE and edge_right < EDGE_TOLERANCE
    interp_decay = _envelope_nonincreasing(amps_r) and _envelope_nonincreasing(amps_l)
    if interp_edges and interp_decay:
        return Regime(RegimeKind.INTERPOLATING, evidence)
    return Regime(RegimeKind.UNDETERMINED, evidence)


def _is_periodic_probe(model: Model, cfg: IterationConfig) -> tuple[bool, dict]:
    if model is Model.FERM1:
        report = solve_ferm1(cfg)
        regime = classify(report)
        return regime.kind is RegimeKind.PERIODIC, {
            "q_squared": cfg.q_squared,
            "regime": regime.kind.value,
            "terminated_by": report.terminated_by.value,
            "steps_taken": report.steps_taken,
            "max_steps": cfg.max_steps,
        }
    if model is Model.FERM2:
        report, _ = solve_ferm2(cfg)
        return report.terminated_by is Termination.NEGATIVE_SQRT, {
            "q_squared": cfg.q_squared,
            "terminated_by": report.terminated_by.value,
            "steps_taken": report.steps_taken,
            "max_steps": cfg.max_steps,
        }
    raise ValueError("critical-coupling search applies to ferm1/ferm2")


def find_qcr(
    model: Model,
    bracket_lo: float,
    bracket_hi: float,
    budget: IterationConfig,
    bisection_steps: int,
    *,
    near_threshold_steps: int | None = NEAR_THRESHOLD_STEPS,
    probe_log: list | None = None,
) -> float:
    """Bisect on q^2 for the onset of the periodic regime (ferm1) or of the
    square-root failure (ferm2).  The result is budget dependent: the swing
    near threshold appears only at large step counts, so the probe budget is
    raised to ``near_threshold_steps`` once the ferm1 bracket is narrower
    than 0.05 (pass None to disable).
    """
    if not bracket_lo < bracket_hi:
        raise ValueError("need bracket_lo < bracket_hi")

    def probe(q2: float, width: float) -> bool:
        cfg = replace(budget, q_squared=q2)
        if (
            model is Model.FERM1
            and near_threshold_steps is not None
            and width < NEAR_THRESHOLD_WIDTH
        ):
            cfg = replace(cfg, max_steps=max(cfg.max_steps, near_threshold_steps))
        hit, entry = _is_periodic_probe(model, cfg)
        if probe_log is not None:
            probe_log.append(entry)
        return hit

    width0 = bracket_hi - bracket_lo
    lo_hit = probe(bracket_lo, width0)
    hi_hit = probe(bracket_hi, width0)
    if lo_hit == hi_hit:
        raise ValueError(
            f"bracket ends give the same outcome ({lo_hit}); cannot bisect"
        )
    if lo_hit:
        raise ValueError("expected the onset above bracket_lo, not below")
    lo, hi = bracket_lo, bracket_hi
    for _ in range(bisection_steps):
        mid = 0.5 * (lo + hi)
        if probe(mid, hi - lo):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def geometric_fit(step_diffs) -> tuple[float, float]:
    """Least-squares fit of log step_diffs against the step index.

    Returns (C, ratio) with step_diffs[n] ~ C * ratio**n, n counted from the
    first entry given.  Needs at least 5 positive entries.
    """
    d = np.asarray(list(step_diffs), dtype=float)
    if len(d) < 5:
        raise ValueError("need at least 5 step differences to fit")
    if np.any(d <= 0):
        raise ValueError("step differences must be positive for a log fit")
    n = np.arange(len(d))
    slope, intercept = np.polyfit(n, np.log(d), 1)
    return float(math.exp(intercept)), float(math.exp(slope))
