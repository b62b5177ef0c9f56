"""
Locating the critical couplings by bisection
============================================

The single equation loses its interpolating solutions near q^2 ~ 1.37; the
two-field system signals its own limit differently, by running into a
negative argument under the square root, near q^2 ~ 2.24.

Reduced budgets keep this demo quick; the acceptance suite runs the full
2000-step budgets with six bisections.
"""

import stringkink as sk
from stringkink.regime import find_qcr
from stringkink.solvers import Model

grid = sk.make_grid(-10, 10, 1001)
budget = sk.default_config(grid, max_steps=600)

probes: list = []
qcr1 = find_qcr(Model.FERM1, 1.0, 1.8, budget, 4, near_threshold_steps=None, probe_log=probes)
print(f"single equation: q^2_cr ~= {qcr1:.3f}")
for p in probes:
    print(f"   probe q^2={p['q_squared']:.4f}: {p['regime']} ({p['steps_taken']} steps)")

probes = []
qcr2 = find_qcr(Model.FERM2, 1.5, 3.0, budget, 4, probe_log=probes)
print(f"\ntwo-field system: q^2_cr ~= {qcr2:.3f}")
for p in probes:
    print(f"   probe q^2={p['q_squared']:.4f}: {p['terminated_by']} ({p['steps_taken']} steps)")
