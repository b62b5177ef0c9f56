"""Shared fixtures.

The heavy solves (regime runs, bisections, large-q comparisons) are session
scoped so the unit tests and the acceptance suite share one computation.
Wall-clock durations are recorded per run so the acceptance criteria with
runtime budgets can assert them no matter which test triggered the work.
"""

from __future__ import annotations

import time

import pytest

import stringkink as sk
from stringkink.physical import q_squared_string
from stringkink.regime import deviation_profile, find_qcr
from stringkink.solvers import Model


@pytest.fixture(scope="session")
def timings() -> dict:
    return {}


def _timed(timings: dict, key: str, fn):
    t0 = time.monotonic()
    result = fn()
    timings[key] = time.monotonic() - t0
    return result


@pytest.fixture(scope="session")
def default_grid() -> sk.Grid:
    return sk.make_grid(-10.0, 10.0, 2001)


@pytest.fixture(scope="session")
def half_grid() -> sk.Grid:
    return sk.make_grid(-10.0, 0.0, 1001)


@pytest.fixture(scope="session")
def padic_report(default_grid, timings) -> sk.SolveReport:
    cfg = sk.default_config(default_grid, max_steps=500)
    return _timed(timings, "padic", lambda: sk.solve_padic(cfg))


@pytest.fixture(scope="session")
def half_run_30(half_grid) -> sk.SolveReport:
    """Thirty half-axis steps with snapshots for the convergence-bound tests."""
    cfg = sk.default_config(half_grid, max_steps=30, step_tol=1e-16, record_every=1)
    return sk.solve_padic_half(cfg)


@pytest.fixture(scope="session")
def half_report(half_grid) -> sk.SolveReport:
    return sk.solve_padic_half(sk.default_config(half_grid))


@pytest.fixture(scope="session")
def ferm1_reports(default_grid, timings) -> dict:
    out = {}
    for q2 in (0.96, 1.0, 1.4, 1.8):
        cfg = sk.default_config(default_grid, q_squared=q2)
        out[q2] = _timed(timings, f"ferm1@{q2}", lambda c=cfg: sk.solve_ferm1(c))
    return out


@pytest.fixture(scope="session")
def ferm2_string(default_grid, timings):
    cfg = sk.default_config(default_grid, q_squared=q_squared_string())
    return _timed(timings, "ferm2@string", lambda: sk.solve_ferm2(cfg))


@pytest.fixture(scope="session")
def deviation_default(half_grid, timings):
    cfg = sk.default_config(half_grid)
    return _timed(timings, "deviation", lambda: deviation_profile(cfg))


@pytest.fixture(scope="session")
def qcr_ferm1(default_grid, timings):
    budget = sk.default_config(default_grid, max_steps=2000)
    probes: list = []
    value = _timed(
        timings,
        "qcr_ferm1",
        lambda: find_qcr(Model.FERM1, 1.0, 1.8, budget, 6, probe_log=probes),
    )
    return value, probes


@pytest.fixture(scope="session")
def qcr_ferm2(default_grid, timings):
    budget = sk.default_config(default_grid, max_steps=2000)
    probes: list = []
    value = _timed(
        timings,
        "qcr_ferm2",
        lambda: find_qcr(Model.FERM2, 1.5, 3.0, budget, 6, probe_log=probes),
    )
    return value, probes


@pytest.fixture(scope="session")
def large_q_runs(default_grid, timings):
    from stringkink.asymptotics import large_q_comparison

    cfg = sk.default_config(default_grid)
    out = {}
    for q2 in (25.0, 100.0):
        out[q2] = _timed(
            timings, f"largeq@{q2}", lambda q=q2: large_q_comparison(q, cfg)
        )
    return out
