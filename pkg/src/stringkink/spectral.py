"""Characteristic equations of the linearized models and their thresholds.

Linearizing the fermionic equations about the flat vacuum and inserting a
mode exp(i Omega t) gives transcendental equations for the complex frequency
Omega with parameter q^2:

* single equation:  (q^2 Omega^2 + 1) exp(-Omega^2/4) - 3 = 0
* two-field system: (q^2 Omega^2 + 1) exp(-Omega^2/2) - exp(-Omega^2/4) - 2 = 0

Roots come in the quadruple +-Omega, +-conj(Omega) and depend on Omega only
through Omega^2.  Below a threshold q0^2 the principal roots form a complex
pair (decaying oscillation); at q0^2 the pair merges into a real double root.
``find_q0`` solves the double-root system {f = 0, df/dOmega = 0} by a 2-d
Newton iteration with analytic Jacobian; the initial point comes from a
coarse real-grid scan, so no user tuning is needed.

Only the principal branch (continued from the closed-form q^2 = 0 root) is
reported; higher branches of the transcendental equations are out of scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "CharModel",
    "ComplexRoot",
    "RootFindError",
    "char_value",
    "char_derivative",
    "find_omega",
    "continue_root",
    "closed_form_q0_root",
    "find_q0",
]

NEWTON_TOL = 1e-10
_MAX_NEWTON = 100


class CharModel(Enum):
    FERM1 = "ferm1"
    FERM2 = "ferm2"


class RootFindError(RuntimeError):
    """Newton iteration failed (no convergence or degenerate derivative)."""


@dataclass(frozen=True)
class ComplexRoot:
    omega_re: float
    omega_im: float
    residual_abs: float
    iterations: int

    @property
    def omega(self) -> complex:
        return complex(self.omega_re, self.omega_im)


def char_value(model: CharModel, omega: complex, q_squared: float) -> complex:
    w2 = omega * omega
    if model is CharModel.FERM1:
        return (q_squared * w2 + 1.0) * cmath.exp(-0.25 * w2) - 3.0
    return (
        (q_squared * w2 + 1.0) * cmath.exp(-0.5 * w2)
        - cmath.exp(-0.25 * w2)
        - 2.0
    )


def char_derivative(model: CharModel, omega: complex, q_squared: float) -> complex:
    """d/dOmega of the characteristic function (analytic)."""
    w2 = omega * omega
    if model is CharModel.FERM1:
        return (
            omega
            * cmath.exp(-0.25 * w2)
            * (2.0 * q_squared - 0.5 * (q_squared * w2 + 1.0))
        )
    return omega * cmath.exp(-0.5 * w2) * (
        2.0 * q_squared - (q_squared * w2 + 1.0)
    ) + 0.5 * omega * cmath.exp(-0.25 * w2)


def find_omega(model: CharModel, q_squared: float, guess: complex) -> ComplexRoot:
    """Newton iteration from ``guess``; succeeds when |f| < 1e-10."""
    if guess == 0 or not cmath.isfinite(guess):
        raise ValueError("guess must be finite and nonzero")
    om = complex(guess)
    for it in range(_MAX_NEWTON + 1):
        try:
            f = char_value(model, om, q_squared)
            df = char_derivative(model, om, q_squared)
        except OverflowError as exc:
            raise RootFindError(f"characteristic function overflow at {om}") from exc
        if abs(f) < NEWTON_TOL:
            return ComplexRoot(om.real, om.imag, abs(f), it)
        if it == _MAX_NEWTON:
            break
        if abs(df) < 1e-14:
            raise RootFindError(
                f"degenerate derivative |f'| = {abs(df):.2e} at Omega = {om}"
            )
        om -= f / df
        if not cmath.isfinite(om):
            raise RootFindError("Newton iterate left finite range")
    raise RootFindError(
        f"no convergence in {_MAX_NEWTON} steps (|f| = {abs(f):.2e})"
    )


def closed_form_q0_root(model: CharModel) -> complex:
    """Principal root at q^2 = 0.

    FERM1: exp(-Omega^2/4) = 3 gives Omega = 2i sqrt(ln 3).  FERM2 is
    quadratic in exp(-Omega^2/4) with usable branch 2, so Omega = 2i sqrt(ln 2).
    """
    if model is CharModel.FERM1:
        return 2j * math.sqrt(math.log(3.0))
    return 2j * math.sqrt(math.log(2.0))


def continue_root(
    model: CharModel, q_squared: float, n_steps: int = 64
) -> ComplexRoot:
    """Track the principal root from q^2 = 0 to ``q_squared`` by continuation.

    The root starts on the imaginary axis and leaves it through a fold at
    small q^2; Newton preserves axis symmetry exactly, so each guess gets a
    small real nudge and steps are halved adaptively across the fold.  The
    reported root is normalized to Re >= 0, Im >= 0 (one member of the
    symmetry quadruple).
    """
    if not (q_squared >= 0 and math.isfinite(q_squared)):
        raise ValueError("q_squared must be finite and >= 0")
    om = closed_form_q0_root(model)
    root = ComplexRoot(om.real, om.imag, 0.0, 0)
    q2 = 0.0
    step = q_squared / n_steps if q_squared > 0 else 0.0
    while q2 < q_squared:
        target = min(q2 + step, q_squared)
        guess = root.omega
        if abs(guess.real) < 1e-9:
            guess += 1e-6  # break the imaginary-axis symmetry
        try:
            nxt = find_omega(model, target, guess)
            # a hop of the Newton basin onto another branch shows up as a
            # discontinuous jump; retry with a smaller continuation step
            if abs(nxt.omega - guess) > 0.25 * (1.0 + abs(guess)):
                raise RootFindError("continuation step left the branch")
        except RootFindError:
            step *= 0.5
            if step < q_squared * 1e-6:
                raise
            continue
        root = nxt
        q2 = target
    return ComplexRoot(abs(root.omega_re), abs(root.omega_im), root.residual_abs, root.iterations)


def _double_root_system(model: CharModel, omega: float, s: float):
    """F = (f, f_Omega) and its Jacobian d(F)/d(omega, s) for real omega."""
    w2 = omega * omega
    if model is CharModel.FERM1:
        e = math.exp(-0.25 * w2)
        f = (s * w2 + 1.0) * e - 3.0
        f_w = e * omega * (2.0 * s - 0.5 * (s * w2 + 1.0))
        f_s = w2 * e
        f_ww = e * (
            -0.5 * w2 * (2.0 * s - 0.5 * (s * w2 + 1.0))
            + 2.0 * s
            - 0.5 * (3.0 * s * w2 + 1.0)
        )
        f_ws = e * omega * (2.0 - 0.5 * w2)
    else:
        e2 = math.exp(-0.5 * w2)
        e4 = math.exp(-0.25 * w2)
        f = (s * w2 + 1.0) * e2 - e4 - 2.0
        f_w = omega * e2 * (2.0 * s - (s * w2 + 1.0)) + 0.5 * omega * e4
        f_s = w2 * e2
        f_ww = e2 * (
            (1.0 - w2) * (2.0 * s - s * w2 - 1.0) - 2.0 * s * w2
        ) + e4 * (0.5 - 0.25 * w2)
        f_ws = omega * e2 * (2.0 - w2)
    return np.array([f, f_w]), np.array([[f_w, f_s], [f_ww, f_ws]])


def _q0_prescan(model: CharModel) -> tuple[float, float]:
    """Coarse real-grid scan for a near-double-root starting point."""
    omegas = np.linspace(0.3, 4.0, 75)
    best, best_val = (1.5, 2.0), math.inf
    for s in np.linspace(0.5, 6.0, 111):
        vals = np.array(
            [abs(char_value(model, complex(w), s)) for w in omegas]
        )
        derivs = np.array(
            [abs(char_derivative(model, complex(w), s)) for w in omegas]
        )
        score = np.min(vals + derivs)
        if score < best_val:
            best_val = score
            best = (float(omegas[np.argmin(vals + derivs)]), float(s))
    return best


def find_q0(model: CharModel) -> tuple[float, float]:
    """Threshold (q0_squared, omega0) where the principal complex pair turns real.

    Solves {f(Omega, q^2) = 0, df/dOmega(Omega, q^2) = 0} for real Omega > 0
    by 2-d Newton with analytic Jacobian, seeded by a coarse grid scan.
    """
    omega, s = _q0_prescan(model)
    for _ in range(80):
        vec, jac = _double_root_system(model, omega, s)
        if np.max(np.abs(vec)) < 1e-13:
            break
        try:
            step = np.linalg.solve(jac, vec)
        except np.linalg.LinAlgError as exc:
            raise RootFindError(f"singular Jacobian at ({omega}, {s})") from exc
        omega -= float(step[0])
        s -= float(step[1])
        if not (math.isfinite(omega) and math.isfinite(s)):
            raise RootFindError("double-root Newton left finite range")
    else:
        raise RootFindError("double-root Newton did not converge")
    vec, _ = _double_root_system(model, omega, s)
    if np.max(np.abs(vec)) > NEWTON_TOL:
        raise RootFindError(f"double-root residual too large: {vec}")
    return float(s), abs(float(omega))
