"""Uniform time grids, sampled fields and odd seed profiles.

Every solver in this package works on real samples over a uniform grid.
Grids and fields are immutable after construction; all operations here are
pure functions returning new objects, so they are safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "SeedKind",
    "make_grid",
    "sample_profile",
    "sup_diff",
    "parity_violation",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid with node i at ``t_min + i * spacing``; last node is exactly ``t_max``."""

    t_min: float
    t_max: float
    n_points: int

    @property
    def spacing(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def is_symmetric(self) -> bool:
        return self.t_min == -self.t_max

    @cached_property
    def nodes(self) -> np.ndarray:
        t = np.linspace(self.t_min, self.t_max, self.n_points)
        if self.is_symmetric:
            # force exact antisymmetry (and an exact 0.0 at the centre node
            # when n_points is odd); linspace alone leaves ~1e-16 residue
            t = 0.5 * (t - t[::-1])
        t.flags.writeable = False
        return t

    @property
    def center_index(self) -> int:
        """Index of the node closest to t = 0."""
        return int(np.argmin(np.abs(self.nodes)))


def make_grid(t_min: float, t_max: float, n_points: int) -> Grid:
    if not (math.isfinite(t_min) and math.isfinite(t_max)):
        raise ValueError("grid bounds must be finite")
    if not t_min < t_max:
        raise ValueError(f"need t_min < t_max, got [{t_min}, {t_max}]")
    n_points = int(n_points)
    if n_points < 3:
        raise ValueError(f"need at least 3 nodes, got {n_points}")
    return Grid(float(t_min), float(t_max), n_points)


@dataclass(frozen=True, eq=False)
class Field:
    """Real samples over a grid.  Values are finite by construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite (no NaN/Inf)")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


class SeedKind(Enum):
    """Odd profiles interpolating +1 -> -1, used as iteration seeds."""

    STEP = "step"
    ARCTAN = "arctan"
    ERF = "erf"


def _erf_array(x: np.ndarray) -> np.ndarray:
    return np.array([math.erf(v) for v in np.asarray(x, dtype=float)])


def sample_profile(kind: SeedKind, grid: Grid) -> Field:
    """Sample a seed profile.  STEP is -sign(t) with value 0 at t = 0."""
    t = grid.nodes
    if kind is SeedKind.STEP:
        v = -np.sign(t) + 0.0
    elif kind is SeedKind.ARCTAN:
        v = -(2.0 / math.pi) * np.arctan(t)
    elif kind is SeedKind.ERF:
        v = -_erf_array(t)
    else:  # pragma: no cover
        raise ValueError(f"unknown seed kind {kind!r}")
    return Field(grid, v)


def _check_same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise ValueError(f"fields live on different grids: {f.grid} vs {g.grid}")


def sup_diff(f: Field, g: Field) -> float:
    """Sup-norm distance max_i |f_i - g_i| over a shared grid."""
    _check_same_grid(f, g)
    return float(np.max(np.abs(f.values - g.values)))


def parity_violation(f: Field) -> float:
    """max_i |f(t_i) + f(-t_i)|; zero for exactly odd fields.

    Requires a grid symmetric about zero so that node reflection is exact.
    """
    if not f.grid.is_symmetric:
        raise ValueError("parity check needs a grid symmetric about t = 0")
    return float(np.max(np.abs(f.values + f.values[::-1])))


def write_field_csv(field: Field, path: str | Path) -> None:
    """Two-column CSV, header ``t,value``, full double precision."""
    lines = ["t,value"]
    lines += [
        f"{t:.17g},{v:.17g}" for t, v in zip(field.grid.nodes, field.values)
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_field_csv(path: str | Path) -> Field:
    raw = Path(path).read_text().strip().splitlines()
    if not raw or raw[0].strip() != "t,value":
        raise ValueError(f"{path}: expected header 't,value'")
    pairs = [line.split(",") for line in raw[1:]]
    t = np.array([float(p[0]) for p in pairs])
    v = np.array([float(p[1]) for p in pairs])
    if len(t) < 3:
        raise ValueError(f"{path}: too few rows for a grid")
    grid = make_grid(t[0], t[-1], len(t))
    if np.max(np.abs(grid.nodes - t)) > 1e-9 * max(1.0, abs(t[-1])):
        raise ValueError(f"{path}: nodes are not a uniform grid")
    return Field(grid, v)
