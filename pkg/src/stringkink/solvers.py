"""Fixed-point iterations for the three models.

* p-adic, full axis:      phi <- cbrt(K phi)
* p-adic, negative semi-axis: phi <- cbrt(K_minus phi)
* fermionic single field: phi <- cbrt(K_q phi)
* fermionic two-field system, reduced to one equation:
      phi <- -eps(t) * sqrt( K[ K_q phi / phi ] ),   sigma = K_q phi / phi

All solves stop on a sup-norm tolerance between successive iterates or on a
step budget.  Seeds are odd profiles; the discrete operators preserve parity
exactly (see kernels), so full-axis iterates stay odd to machine precision.

Two-field specifics.  The reduction divides by phi, so the seed must be
nonzero at the origin; the origin sample is assigned the alternating sign
eps(0) = (-1)^n (n = iterate number).  That sample sits inside subsequent
quadratures and injects an alternating asymmetry of order h * kernel, so raw
successive iterates stall near ~1e-2 while the even/odd subsequences converge
properly.  ``solve_ferm2`` therefore records and tests the two-step distance
sup|phi_{n+1} - phi_{n-1}| (origin node excluded) and reports the mean of the
last two iterates as the final field, which cancels the alternating component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .grids import Field, Grid, SeedKind, sample_profile
from .kernels import (
    DEFAULT_WINDOW,
    KernelKind,
    KernelSpec,
    _convolve_values,
    step_convolution,
)

__all__ = [
    "Model",
    "Termination",
    "IterationConfig",
    "SolveReport",
    "SystemState",
    "DivisionNearZero",
    "cbrt_signed",
    "solve_padic",
    "solve_padic_half",
    "solve_ferm1",
    "solve_ferm2",
    "residual",
]


class Model(Enum):
    PADIC = "padic"
    PADIC_HALF = "padic-half"
    FERM1 = "ferm1"
    FERM2 = "ferm2"


class Termination(Enum):
    CONVERGED = "Converged"
    MAX_STEPS = "MaxSteps"
    NEGATIVE_SQRT = "NegativeSqrt"
    NON_FINITE = "NonFinite"


class DivisionNearZero(RuntimeError):
    """The two-field reduction hit |phi| < 1e-300 away from the origin."""


@dataclass(frozen=True)
class IterationConfig:
    grid: Grid
    max_steps: int = 2000
    step_tol: float = 1e-9
    window: float = DEFAULT_WINDOW
    q_squared: float = 0.0
    seed: SeedKind = SeedKind.STEP
    record_every: int = 500

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not self.step_tol > 0:
            raise ValueError("step_tol must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass(frozen=True)
class SolveReport:
    model: Model
    config: IterationConfig
    final: Field
    steps_taken: int
    step_diffs: tuple[float, ...]
    residual: float
    terminated_by: Termination
    snapshots: tuple[tuple[int, Field], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SystemState:
    """Paired fields of the two-field model; sigma even, phi odd (diagnostic)."""

    phi: Field
    sigma: Field


def cbrt_signed(x):
    """sign(x) * |x|^(1/3); the arithmetic cube root, odd and monotone."""
    return np.cbrt(x)


def _require_symmetric(grid: Grid) -> None:
    if not grid.is_symmetric:
        raise ValueError("full-axis solves need a grid symmetric about t = 0")
    if abs(grid.nodes[grid.center_index]) != 0.0:
        raise ValueError("full-axis solves need a node exactly at t = 0")


def _seed_values(cfg: IterationConfig, initial: Field | None) -> np.ndarray:
    if initial is not None:
        if initial.grid != cfg.grid:
            raise ValueError("initial field lives on a different grid")
        return initial.values.copy()
    return sample_profile(cfg.seed, cfg.grid).values.copy()


def _iterate_cbrt(
    model: Model, cfg: IterationConfig, kind: KernelKind, initial: Field | None
) -> SolveReport:
    """Shared loop for the cube-root models."""
    grid = cfg.grid
    spec = KernelSpec(kind, cfg.q_squared, cfg.window)
    phi = _seed_values(cfg, initial)
    diffs: list[float] = []
    snaps: list[tuple[int, Field]] = []
    cause = Termination.MAX_STEPS
    steps = 0
    with np.errstate(all="ignore"):
        for n in range(1, cfg.max_steps + 1):
            if n == 1 and initial is None and cfg.seed is SeedKind.STEP:
                conv = step_convolution(spec, grid).values
            else:
                conv = _convolve_values(spec, grid, phi)
            if not np.all(np.isfinite(conv)):
                cause = Termination.NON_FINITE
                steps = n
                break
            nxt = np.cbrt(conv)
            diffs.append(float(np.max(np.abs(nxt - phi))))
            phi = nxt
            steps = n
            if n == 1 or n % cfg.record_every == 0:
                snaps.append((n, Field(grid, phi)))
            if diffs[-1] <= cfg.step_tol:
                cause = Termination.CONVERGED
                break
    final = Field(grid, phi)
    if cause is Termination.NON_FINITE:
        res = math.inf
    elif model is Model.PADIC_HALF:
        res = _half_axis_residual(final, cfg.window)
    else:
        res = residual(model, final, cfg.q_squared, window=cfg.window)
    return SolveReport(
        model, cfg, final, steps, tuple(diffs), res, cause, tuple(snaps)
    )


def solve_padic(cfg: IterationConfig, initial: Field | None = None) -> SolveReport:
    """Full-axis p-adic (p = 3) kink iteration phi <- cbrt(K phi)."""
    _require_symmetric(cfg.grid)
    return _iterate_cbrt(Model.PADIC, cfg, KernelKind.GAUSS, initial)


def solve_padic_half(cfg: IterationConfig, initial: Field | None = None) -> SolveReport:
    """p-adic iteration on the negative semi-axis with the odd-sector kernel."""
    if cfg.grid.t_max != 0.0:
        raise ValueError("half-axis solve needs a grid ending at t = 0")
    return _iterate_cbrt(Model.PADIC_HALF, cfg, KernelKind.HALF_AXIS, initial)


def solve_ferm1(cfg: IterationConfig, initial: Field | None = None) -> SolveReport:
    """Single-equation fermionic iteration phi <- cbrt(K_q phi)."""
    _require_symmetric(cfg.grid)
    return _iterate_cbrt(Model.FERM1, cfg, KernelKind.FERMIONIC, initial)


def solve_ferm2(
    cfg: IterationConfig, initial: Field | None = None
) -> tuple[SolveReport, SystemState]:
    """Two-field iteration phi <- -eps sqrt(K[K_q phi / phi]) with eps(0) = (-1)^n.

    Terminates ``NegativeSqrt`` when the square-root argument goes negative at
    any node (the procedure cannot represent oscillatory solutions).  The
    returned state carries the mean of the last two iterates and the matching
    auxiliary field sigma = K_q phi / phi averaged the same way.
    """
    grid = cfg.grid
    _require_symmetric(grid)
    i0 = grid.center_index
    k_q = KernelSpec(KernelKind.FERMIONIC, cfg.q_squared, cfg.window)
    k_gauss = KernelSpec(KernelKind.GAUSS, 0.0, cfg.window)
    eps = np.sign(grid.nodes) + 0.0

    phi = _seed_values(cfg, initial)
    phi[i0] = -1.0  # -eps(0) with eps(0) = (-1)^0
    prev = None
    diffs: list[float] = []
    snaps: list[tuple[int, Field]] = []
    cause = Termination.MAX_STEPS
    steps = 0
    off_origin = np.arange(grid.n_points) != i0

    def quotient(values: np.ndarray) -> np.ndarray:
        if np.min(np.abs(values[off_origin])) < 1e-300:
            raise DivisionNearZero("phi vanished away from the origin")
        return _convolve_values(k_q, grid, values) / values

    with np.errstate(all="ignore"):
        for n in range(1, cfg.max_steps + 1):
            arg = _convolve_values(k_gauss, grid, quotient(phi))
            if not np.all(np.isfinite(arg)):
                cause = Termination.NON_FINITE
                steps = n
                break
            if np.any(arg < 0.0):
                cause = Termination.NEGATIVE_SQRT
                steps = n
                break
            nxt = -eps * np.sqrt(arg)
            nxt[i0] = -((-1.0) ** n) * math.sqrt(arg[i0])
            ref = prev if prev is not None else phi
            diffs.append(float(np.max(np.abs((nxt - ref)[off_origin]))))
            prev = phi
            phi = nxt
            steps = n
            if n == 1 or n % cfg.record_every == 0:
                snaps.append((n, Field(grid, phi)))
            if n >= 2 and diffs[-1] <= cfg.step_tol:
                cause = Termination.CONVERGED
                break

    if prev is None:
        mean_phi = phi
    else:
        mean_phi = 0.5 * (phi + prev)
    if abs(mean_phi[i0]) < 1e-300:
        mean_phi = mean_phi.copy()
        mean_phi[i0] = 0.5 * (mean_phi[i0 - 1] + mean_phi[i0 + 1])

    def sigma_of(values: np.ndarray) -> np.ndarray:
        return _convolve_values(k_q, grid, values) / values

    if cause in (Termination.NEGATIVE_SQRT, Termination.NON_FINITE):
        state_phi, state_sigma = phi, sigma_of(phi)
        res = math.inf
    else:
        state_phi = mean_phi
        state_sigma = (
            0.5 * (sigma_of(phi) + sigma_of(prev)) if prev is not None else sigma_of(phi)
        )
        res = math.nan  # set below from the returned state
    state = SystemState(Field(grid, state_phi), Field(grid, np.asarray(state_sigma)))
    if math.isnan(res):
        res = residual(Model.FERM2, state, cfg.q_squared, window=cfg.window)
    report = SolveReport(
        Model.FERM2, cfg, state.phi, steps, tuple(diffs), res, cause, tuple(snaps)
    )
    return report, state


def _interior_mask(grid: Grid, margin: float, left_only: bool = False) -> np.ndarray:
    t = grid.nodes
    keep = t >= t.min() + margin
    if not left_only:
        keep &= t <= t.max() - margin
    if not np.any(keep):
        keep = np.zeros(grid.n_points, dtype=bool)
        keep[grid.center_index] = True
    return keep


def _half_axis_residual(f: Field, window: float, margin: float | None = None) -> float:
    spec = KernelSpec(KernelKind.HALF_AXIS, 0.0, window)
    lhs = _convolve_values(spec, f.grid, f.values)
    keep = _interior_mask(f.grid, window if margin is None else margin, left_only=True)
    return float(np.max(np.abs((lhs - f.values**3)[keep])))


def residual(
    model: Model,
    state: Field | SystemState,
    q_squared: float = 0.0,
    *,
    window: float = DEFAULT_WINDOW,
    margin: float | None = None,
) -> float:
    """Sup-norm defect of the model equation over interior nodes.

    A boundary margin (default: one window width, clamped so at least the
    central node survives) is excluded, since constant continuation is exact
    only in flat tails.  For the two-field model the value is the larger of
    the two equation defects, sup|K sigma - phi^2| and sup|K_q phi - sigma phi|.
    """
    margin = window if margin is None else margin
    if model is Model.FERM2:
        if not isinstance(state, SystemState):
            raise TypeError("two-field residual needs a SystemState")
        grid = state.phi.grid
        if state.sigma.grid != grid:
            raise ValueError("phi and sigma live on different grids")
        keep = _interior_mask(grid, margin)
        # the solution has a break at t = 0 where the nodal value is a
        # convention, so the origin never enters the two-field defect
        i0 = grid.center_index
        if abs(grid.nodes[i0]) == 0.0:
            keep = keep.copy()
            keep[i0] = False
            if not np.any(keep):
                keep[i0 - 1] = keep[i0 + 1] = True
        k_q = KernelSpec(KernelKind.FERMIONIC, q_squared, window)
        k_gauss = KernelSpec(KernelKind.GAUSS, 0.0, window)
        r1 = _convolve_values(k_gauss, grid, state.sigma.values) - state.phi.values**2
        r2 = (
            _convolve_values(k_q, grid, state.phi.values)
            - state.sigma.values * state.phi.values
        )
        return float(max(np.max(np.abs(r1[keep])), np.max(np.abs(r2[keep]))))
    if not isinstance(state, Field):
        raise TypeError(f"{model.value} residual needs a Field")
    if model is Model.PADIC:
        spec = KernelSpec(KernelKind.GAUSS, 0.0, window)
    elif model is Model.FERM1:
        spec = KernelSpec(KernelKind.FERMIONIC, q_squared, window)
    else:
        raise ValueError(f"no residual defined for model {model!r}")
    lhs = _convolve_values(spec, state.grid, state.values)
    keep = _interior_mask(state.grid, margin)
    return float(np.max(np.abs((lhs - state.values**3)[keep])))


def default_config(grid: Grid, **overrides) -> IterationConfig:
    """Reproduction defaults: window 10, tol 1e-9, budget 2000, step seed."""
    return replace(IterationConfig(grid=grid), **overrides)
