"""
The two-field system and the smoothing map
==========================================

The system iteration phi <- -eps sqrt(K[K_q phi / phi]) needs phi(0) != 0,
so the origin sample carries the alternating sign (-1)^n.  The converged
solution has a genuine break at t = 0.  Applying the exp((1/8) d^2/dt^2)
smoothing produces the physical field, with the break gone.

The final comparison reproduces the exact-vs-approximate model gap at the
preferred coupling.
"""

from pathlib import Path

import numpy as np

import stringkink as sk
from stringkink.physical import (
    compare_models,
    physical_pair_from_system,
    q_squared_string,
)

q2 = q_squared_string()
print(f"preferred coupling q^2 = {q2:.6f}")

grid = sk.make_grid(-10, 10, 2001)
report, state = sk.solve_ferm2(sk.default_config(grid, q_squared=q2))
i0 = grid.center_index
h = grid.spacing
print(f"terminated: {report.terminated_by.value} after {report.steps_taken} steps")
print(f"one-sided values at the break: {state.phi.values[i0 - 1]:+.4f} / "
      f"{state.phi.values[i0 + 1]:+.4f}")
print(f"sigma(+-10) = {state.sigma.values[0]:.6f}")

pair = physical_pair_from_system(state)
slope_jump_in = abs(state.phi.values[i0 + 1] - state.phi.values[i0]) / h
slope_out = abs(pair.psi.values[i0 + 1] - pair.psi.values[i0]) / h
print(f"\none-sided slope before smoothing: {slope_jump_in:.1f} (the break)")
print(f"one-sided slope after smoothing:  {slope_out:.3f} (smooth)")

psi_exact, psi_approx, gap = compare_models(q2, sk.default_config(grid))
print(f"\nsup gap between the two models' physical fields: {gap:.4f}")

out = Path("demo-output/two-field")
out.mkdir(parents=True, exist_ok=True)
sk.write_field_csv(state.phi, out / "phi.csv")
sk.write_field_csv(state.sigma, out / "sigma.csv")
sk.write_field_csv(pair.psi, out / "psi.csv")
sk.write_field_csv(pair.upsilon, out / "upsilon.csv")
sk.write_field_csv(psi_approx, out / "psi_single_model.csv")
print(f"fields written to {out}/")
