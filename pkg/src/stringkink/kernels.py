"""Discrete Gaussian convolution operators.

Four kernels are provided:

* ``GAUSS``      -- pi^(-1/2) exp(-(t-t')^2), the integral form of exp((1/4) d^2/dt^2)
* ``FERMIONIC``  -- the same Gaussian with prefactor 1 + 2 q^2 (1 - 2 (t-t')^2),
                    i.e. (-q^2 d^2/dt^2 + 1) applied to the Gaussian kernel
* ``HALF_AXIS``  -- the odd-sector kernel exp(-(t-t')^2) - exp(-(t+t')^2) on t <= 0
* ``SMOOTHING``  -- sqrt(2/pi) exp(-2 (t-t')^2), the integral form of exp((1/8) d^2/dt^2)

The integral is truncated to |t - t'| <= window and evaluated by composite
Simpson quadrature on the field's own grid.  Outside the grid the field is
continued by its edge value, which is exact for asymptotically constant
solutions.  Stencils are precomputed per (kernel, window, spacing), so one
convolution costs O(n_points * window / spacing).

Translation-invariant kernels are applied by symmetric pairwise
accumulation, w0*f(t) + sum_k w_k*(f(t-kh) + f(t+kh)).  The inner sum
f(t-kh) + f(t+kh) cancels exactly in floating point for odd fields on a
symmetric grid, so the discrete operators preserve parity exactly, not just
to rounding-accumulation level.

Quadrature caveat: a sampled jump discontinuity carries an O(h^2) ambiguity
that no node-based rule can beat (~1e-5 at the default spacing).  The odd
step seed is therefore convolved in closed form via ``step_convolution``;
the solvers use it for their first iterate, which the underlying model
states analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .grids import Field, Grid, _erf_array

__all__ = [
    "KernelKind",
    "KernelSpec",
    "DEFAULT_WINDOW",
    "kernel_weight",
    "convolve",
    "step_convolution",
    "auto_window",
]

DEFAULT_WINDOW = 10.0

_SQRT_PI = math.sqrt(math.pi)


class KernelKind(Enum):
    GAUSS = "gauss"
    FERMIONIC = "fermionic"
    HALF_AXIS = "half-axis"
    SMOOTHING = "smoothing"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel kind plus truncation half-width; q_squared is used by FERMIONIC only."""

    kind: KernelKind
    q_squared: float = 0.0
    window: float = DEFAULT_WINDOW

    def __post_init__(self):
        if not (self.window > 0 and math.isfinite(self.window)):
            raise ValueError(f"window must be positive, got {self.window}")
        if self.kind is KernelKind.FERMIONIC and not self.q_squared >= 0:
            raise ValueError(f"q_squared must be >= 0, got {self.q_squared}")


def kernel_weight(spec: KernelSpec, t, t_prime):
    """Pointwise kernel value; accepts scalars or numpy arrays."""
    t = np.asarray(t, dtype=float)
    tp = np.asarray(t_prime, dtype=float)
    u2 = (t - tp) ** 2
    if spec.kind is KernelKind.GAUSS:
        w = np.exp(-u2) / _SQRT_PI
    elif spec.kind is KernelKind.FERMIONIC:
        w = np.exp(-u2) * (1.0 + 2.0 * spec.q_squared * (1.0 - 2.0 * u2)) / _SQRT_PI
    elif spec.kind is KernelKind.HALF_AXIS:
        w = (np.exp(-u2) - np.exp(-((t + tp) ** 2))) / _SQRT_PI
    elif spec.kind is KernelKind.SMOOTHING:
        w = math.sqrt(2.0 / math.pi) * np.exp(-2.0 * u2)
    else:  # pragma: no cover
        raise ValueError(f"unknown kernel kind {spec.kind!r}")
    return w if w.ndim else float(w)


def _simpson_pattern(n_nodes: int) -> np.ndarray:
    # composite Simpson coefficients 1,4,2,...,2,4,1 (n_nodes odd), scaled by 1/3
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValueError("simpson rule needs an odd node count >= 3")
    c = np.full(n_nodes, 2.0)
    c[1::2] = 4.0
    c[0] = c[-1] = 1.0
    return c / 3.0


@lru_cache(maxsize=64)
def _stencil(kind: KernelKind, q_squared: float, window: float, spacing: float):
    """Quadrature weights w_k for offsets k = 0..m (palindromic half), plus m."""
    m = max(1, round(window / spacing))
    u = np.arange(-m, m + 1) * spacing
    spec = KernelSpec(kind, q_squared, window)
    w = kernel_weight(spec, u, 0.0) * _simpson_pattern(2 * m + 1) * spacing
    w.flags.writeable = False
    return w, m


def _convolve_values(spec: KernelSpec, grid: Grid, values: np.ndarray) -> np.ndarray:
    """Raw windowed convolution; no finiteness check on the output."""
    if spec.kind is KernelKind.HALF_AXIS:
        matrix, pad = _half_axis_operator(grid, spec.window)
        ext = np.concatenate([np.full(pad, values[0]), values])
        return matrix @ ext
    w, m = _stencil(spec.kind, spec.q_squared, spec.window, grid.spacing)
    n = grid.n_points
    ext = np.concatenate([np.full(m, values[0]), values, np.full(m, values[-1])])
    out = w[m] * ext[m : m + n]
    for k in range(1, m + 1):
        out += w[m + k] * (ext[m - k : m - k + n] + ext[m + k : m + k + n])
    return out


@lru_cache(maxsize=8)
def _half_axis_cached(t_min: float, t_max: float, n_points: int, window: float):
    grid = Grid(t_min, t_max, n_points)
    h = grid.spacing
    pad = max(1, round(window / h))
    if (pad + n_points) % 2 == 0:
        pad += 1  # composite Simpson needs an odd node count overall
    tp = np.concatenate([t_min + np.arange(-pad, 0) * h, grid.nodes])
    weights = _simpson_pattern(pad + n_points) * h
    t_col = grid.nodes[:, None]
    spec = KernelSpec(KernelKind.HALF_AXIS, 0.0, window)
    matrix = kernel_weight(spec, t_col, tp[None, :]) * weights[None, :]
    matrix[np.abs(t_col - tp[None, :]) > window] = 0.0
    matrix.flags.writeable = False
    return matrix, pad


def _half_axis_operator(grid: Grid, window: float):
    if grid.t_max != 0.0:
        raise ValueError("half-axis kernel needs a grid ending at t = 0")
    return _half_axis_cached(grid.t_min, grid.t_max, grid.n_points, window)


def convolve(spec: KernelSpec, f: Field) -> Field:
    """Windowed quadrature of the kernel against ``f``.

    The field is continued by its edge values outside the grid.  Raises
    ``FloatingPointError`` if the output leaves finite range, which signals
    divergence of an enclosing iteration.
    """
    out = _convolve_values(spec, f.grid, f.values)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("convolution produced non-finite values")
    return Field(f.grid, out)


def step_convolution(spec: KernelSpec, grid: Grid) -> Field:
    """Closed-form convolution of the odd step seed -sign(t).

    The jump at t = 0 makes node quadrature O(h^2)-limited, so the first
    iterate from the step seed is evaluated analytically:

    * GAUSS      -> -erf(t)
    * FERMIONIC  -> -erf(t) - (4 q^2 / sqrt(pi)) t exp(-t^2)
    * SMOOTHING  -> -erf(sqrt(2) t)
    * HALF_AXIS  -> -erf(t) on t <= 0 (seed is the constant 1 there)
    """
    t = grid.nodes
    if spec.kind is KernelKind.GAUSS:
        v = -_erf_array(t)
    elif spec.kind is KernelKind.FERMIONIC:
        v = -_erf_array(t) - (4.0 * spec.q_squared / _SQRT_PI) * t * np.exp(-(t**2))
    elif spec.kind is KernelKind.SMOOTHING:
        v = -_erf_array(math.sqrt(2.0) * t)
    elif spec.kind is KernelKind.HALF_AXIS:
        if grid.t_max != 0.0:
            raise ValueError("half-axis kernel needs a grid ending at t = 0")
        v = -_erf_array(t)
    else:  # pragma: no cover
        raise ValueError(f"unknown kernel kind {spec.kind!r}")
    return Field(grid, v)


def auto_window(tail_tol: float) -> float:
    """Smallest half-width whose neglected Gaussian tail mass is below ``tail_tol``.

    The widest weight in use is exp(-u^2); its mass outside |u| <= w is
    erfc(w).  Monotone non-increasing in ``tail_tol``.
    """
    if not (0.0 < tail_tol < 1.0):
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    lo, hi = 0.0, 1.0
    while math.erfc(hi) >= tail_tol:
        hi *= 2.0
        if hi > 64.0:  # erfc underflows long before this
            return hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if math.erfc(mid) < tail_tol:
            hi = mid
        else:
            lo = mid
    return hi
