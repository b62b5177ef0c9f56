"""Large-coupling analysis: the rescaling chi(t) = phi(q t) and the
anharmonic-oscillator limit -chi'' + chi = chi^3.

``oscillator_orbit`` integrates chi'' = chi - chi^3 with a fixed-step
classical Runge-Kutta scheme and measures the period from same-direction
returns to the initial phase-space section.  The conserved energy is
E = chi'^2/2 - chi^2/2 + chi^4/4; every orbit of this potential is bounded,
so the |chi| > 10 guard only trips for initial data placed out there.

``large_q_comparison`` runs the single-field solve in the periodic regime,
rescales the final field, and compares its period against the oscillator
orbit of matched amplitude.  The mismatch is reported as measured; no decay
rate is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .grids import Field, Grid, make_grid
from .regime import Regime, RegimeKind, classify
from .solvers import IterationConfig, SolveReport, solve_ferm1

__all__ = [
    "OscillatorOrbit",
    "UnboundedOrbit",
    "NotPeriodic",
    "rescale_field",
    "oscillator_orbit",
    "oscillator_energy",
    "large_q_comparison",
]


class UnboundedOrbit(RuntimeError):
    """Trajectory escaped its energy shell (numerical divergence)."""


class NotPeriodic(RuntimeError):
    """large_q_comparison needs a solve classified Periodic."""


@dataclass(frozen=True)
class OscillatorOrbit:
    """chi(t) samples with velocity and energy series for the orbit CSV."""

    trajectory: Field
    period: float
    energy: float
    amplitude: float
    velocity: np.ndarray
    energy_series: np.ndarray

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy_series - self.energy)))


def rescale_field(phi: Field, q: float) -> Field:
    """chi(t) = phi(q t) by linear interpolation; target nodes stay interior."""
    if not q > 0:
        raise ValueError("rescaling needs q > 0")
    src = phi.grid
    chi_grid = make_grid(src.t_min / q, src.t_max / q, src.n_points)
    where = q * chi_grid.nodes
    if where[0] < src.t_min - 1e-12 or where[-1] > src.t_max + 1e-12:
        raise ValueError("rescaled nodes fall outside the source grid")
    vals = np.interp(where, src.nodes, phi.values)
    return Field(chi_grid, vals)


def oscillator_energy(chi, dchi):
    return 0.5 * np.asarray(dchi) ** 2 - 0.5 * np.asarray(chi) ** 2 + 0.25 * np.asarray(chi) ** 4


def _rk4_step(chi: float, dchi: float, dt: float) -> tuple[float, float]:
    def acc(x):
        return x - x**3

    k1x, k1v = dchi, acc(chi)
    k2x, k2v = dchi + 0.5 * dt * k1v, acc(chi + 0.5 * dt * k1x)
    k3x, k3v = dchi + 0.5 * dt * k2v, acc(chi + 0.5 * dt * k2x)
    k4x, k4v = dchi + dt * k3v, acc(chi + dt * k3x)
    return (
        chi + dt * (k1x + 2 * k2x + 2 * k3x + k4x) / 6.0,
        dchi + dt * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0,
    )


def oscillator_orbit(
    initial_chi: float,
    initial_dchi: float,
    dt: float = 1e-3,
    max_time: float = 100.0,
) -> OscillatorOrbit:
    """Integrate chi'' = chi - chi^3 and measure the orbit period.

    The period is the mean spacing of same-direction crossings of the initial
    section (chi = chi(0) when chi'(0) != 0, else chi' = 0), located by linear
    interpolation between steps.  With no return by ``max_time`` (an
    equilibrium, or max_time too short) the period is NaN.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    n_steps = int(round(max_time / dt))
    chi = np.empty(n_steps + 1)
    dchi = np.empty(n_steps + 1)
    chi[0], dchi[0] = float(initial_chi), float(initial_dchi)
    # every true orbit stays inside its energy turning point
    # A^2 = 1 + sqrt(1 + 4E); anything beyond that (with a 10.0 floor for
    # small orbits) is numerical divergence
    e0 = float(oscillator_energy(chi[0], dchi[0]))
    bound = max(10.0, 1.05 * math.sqrt(1.0 + math.sqrt(max(1.0 + 4.0 * e0, 0.0))))
    use_position_section = abs(initial_dchi) > 1e-12
    crossings: list[float] = []
    for k in range(n_steps):
        chi[k + 1], dchi[k + 1] = _rk4_step(chi[k], dchi[k], dt)
        if not math.isfinite(chi[k + 1]) or abs(chi[k + 1]) > bound:
            raise UnboundedOrbit(
                f"|chi| left the energy shell at t = {(k + 1) * dt:.3f}"
            )
        if use_position_section:
            s0, s1 = chi[k] - chi[0], chi[k + 1] - chi[0]
            direction = dchi[k] * initial_dchi > 0
        else:
            s0, s1 = dchi[k], dchi[k + 1]
            accel0 = chi[0] - chi[0] ** 3
            direction = (chi[k] - chi[k] ** 3) * accel0 > 0 if accel0 != 0 else False
        if s0 < 0.0 <= s1 and direction:
            crossings.append((k + (-s0) / (s1 - s0)) * dt)
        elif s0 > 0.0 >= s1 and direction:
            crossings.append((k + s0 / (s0 - s1)) * dt)
    if len(crossings) >= 2:
        period = float((crossings[-1] - crossings[0]) / (len(crossings) - 1))
    elif len(crossings) == 1:
        period = float(crossings[0])
    else:
        period = math.nan
    grid = make_grid(0.0, n_steps * dt, n_steps + 1)
    energies = oscillator_energy(chi, dchi)
    return OscillatorOrbit(
        trajectory=Field(grid, chi),
        period=period,
        energy=float(energies[0]),
        amplitude=float(np.max(np.abs(chi))),
        velocity=dchi,
        energy_series=energies,
    )


def _wave_statistics(chi: Field, boundary_margin: float) -> tuple[float, float]:
    """(period, amplitude) of an oscillatory field away from the boundaries.

    Period = twice the mean spacing of interpolated zero crossings; amplitude
    = mean |local extremum|, both over the interior.  The defect around the
    odd kink at t = 0 is excluded from the zero statistics.
    """
    t, v = chi.grid.nodes, chi.values
    keep = np.abs(t) <= t[-1] - boundary_margin
    ti, vi = t[keep], v[keep]
    sgn = np.sign(vi)
    (cross,) = np.where(np.diff(sgn) != 0)
    tz = ti[cross] - vi[cross] * (ti[cross + 1] - ti[cross]) / (
        vi[cross + 1] - vi[cross]
    )
    curv = np.diff(np.sign(np.diff(vi)))
    (ext,) = np.where(curv != 0)
    amps = np.abs(vi[ext + 1])
    amps = amps[amps > 0.2 * np.max(np.abs(vi))]
    if len(tz) < 4 or len(amps) < 2:
        raise NotPeriodic("too few oscillations inside the grid to measure")
    spacing = np.diff(tz)
    spacing = spacing[spacing > 0.25 * np.median(spacing)]  # drop the origin defect
    return 2.0 * float(np.mean(spacing)), float(np.mean(amps))


def large_q_comparison(
    q_squared: float, cfg: IterationConfig
) -> tuple[SolveReport, OscillatorOrbit, float]:
    """Compare the rescaled periodic solution against the matched-amplitude
    oscillator orbit; returns (solve report, orbit, relative period mismatch)."""
    cfg = replace(cfg, q_squared=q_squared)
    report = solve_ferm1(cfg)
    regime = classify(report)
    if regime.kind is not RegimeKind.PERIODIC:
        raise NotPeriodic(
            f"solve at q^2 = {q_squared} classified {regime.kind.value}; "
            "the oscillator comparison needs the periodic regime"
        )
    q = math.sqrt(q_squared)
    chi = rescale_field(report.final, q)
    period_chi, amplitude = _wave_statistics(chi, boundary_margin=4.0 / q)
    orbit = oscillator_orbit(
        amplitude, 0.0, dt=1e-3, max_time=max(40.0, 8.0 * period_chi)
    )
    mismatch = abs(period_chi - orbit.period) / orbit.period
    return report, orbit, float(mismatch)
