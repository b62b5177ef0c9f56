"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the lines as they
come; heavy solves are shared session fixtures, and their wall-clock times
are asserted where a criterion carries a runtime budget.
"""

import math
import time

import numpy as np
import pytest

import stringkink as sk
from stringkink.kernels import KernelKind, KernelSpec, convolve, kernel_weight
from stringkink.physical import physical_pair_from_system, q_squared_string
from stringkink.regime import RegimeKind, classify, geometric_fit
from stringkink.solvers import Model, Termination, cbrt_signed, residual
from stringkink.spectral import CharModel, char_value, find_q0

RNG = np.random.default_rng(2024)


def _line(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d} {name}: {detail}")


def test_criterion_01_padic_kink_exists(padic_report, timings):
    rep = padic_report
    f = rep.final
    checks = {
        "converged": rep.terminated_by is Termination.CONVERGED,
        "steps<=500": rep.steps_taken <= 500,
        "residual<1e-6": rep.residual < 1e-6
        and residual(Model.PADIC, f, margin=4.0) < 1e-6,
        "parity<1e-8": sk.parity_violation(f) < 1e-8,
        "edges": abs(f.values[0] - 1.0) < 1e-3 and abs(f.values[-1] + 1.0) < 1e-3,
        "runtime<10s": timings["padic"] < 10.0,
    }
    _line(
        1,
        "p-adic kink",
        all(checks.values()),
        f"steps={rep.steps_taken} residual={rep.residual:.2e} "
        f"parity={sk.parity_violation(f):.2e} edge={abs(f.values[-1] + 1):.2e} "
        f"time={timings['padic']:.2f}s",
    )
    assert all(checks.values()), checks


def test_criterion_02_first_iterate_closed_form(default_grid):
    rep = sk.solve_padic(sk.default_config(default_grid, max_steps=1))
    target = cbrt_signed(-np.array([math.erf(x) for x in default_grid.nodes]))
    gap = float(np.max(np.abs(rep.final.values - target)))
    _line(2, "first iterate = cbrt(-erf)", gap < 1e-7, f"sup gap = {gap:.2e}")
    assert gap < 1e-7


def test_criterion_03_proof_constant(deviation_default, timings):
    dm = deviation_default.delta_max
    ok = 0.0 < dm < 0.05 and timings["deviation"] < 5.0
    _line(3, "deviation bound", ok, f"delta_max={dm:.6f} time={timings['deviation']:.2f}s")
    assert ok


def test_criterion_04_geometric_convergence(half_run_30):
    diffs = half_run_30.step_diffs[4:28]  # steps 5..28; later steps hit float floor
    _, ratio = geometric_fit(diffs)
    _line(4, "geometric convergence", ratio <= 0.5, f"fit ratio = {ratio:.4f}")
    assert ratio <= 0.5


def test_criterion_05_regime_reproduction(ferm1_reports, timings):
    expected = {
        0.96: RegimeKind.INTERPOLATING,
        1.0: RegimeKind.INTERPOLATING,
        1.4: RegimeKind.PERIODIC,
        1.8: RegimeKind.PERIODIC,
    }
    got = {q2: classify(rep).kind for q2, rep in ferm1_reports.items()}
    total = sum(timings[f"ferm1@{q2}"] for q2 in expected)
    ok = got == expected and total < 60.0
    _line(
        5,
        "regimes at 0.96/1.0/1.4/1.8",
        ok,
        " ".join(f"{q2}:{kind.value}" for q2, kind in sorted(got.items()))
        + f" total_time={total:.1f}s",
    )
    assert ok, got


def test_criterion_06_critical_coupling_single(qcr_ferm1, timings):
    value, probes = qcr_ferm1
    ok = 1.25 <= value <= 1.55 and timings["qcr_ferm1"] < 600.0
    _line(
        6,
        "q^2_cr single equation",
        ok,
        f"q^2_cr={value:.4f} probes={len(probes)} time={timings['qcr_ferm1']:.0f}s",
    )
    assert ok


def test_criterion_07_critical_coupling_system(qcr_ferm2, timings):
    value, probes = qcr_ferm2
    ok = 2.0 <= value <= 2.5 and timings["qcr_ferm2"] < 600.0
    _line(
        7,
        "q^2_cr system",
        ok,
        f"q^2_cr={value:.4f} probes={len(probes)} time={timings['qcr_ferm2']:.0f}s",
    )
    assert ok


def test_criterion_08_spectral_thresholds():
    t0 = time.monotonic()
    q0_single, omega_single = find_q0(CharModel.FERM1)
    q0_system, omega_system = find_q0(CharModel.FERM2)
    elapsed = time.monotonic() - t0
    res1 = abs(char_value(CharModel.FERM1, omega_single, q0_single))
    res2 = abs(char_value(CharModel.FERM2, omega_system, q0_system))
    ok = (
        abs(q0_single - 1.77) <= 0.02
        and abs(q0_system - 3.05) <= 0.02
        and res1 < 1e-10
        and res2 < 1e-10
        and elapsed < 1.0
    )
    _line(
        8,
        "spectral thresholds",
        ok,
        f"q0^2(single)={q0_single:.4f} q0^2(system)={q0_system:.4f} "
        f"residuals=({res1:.1e},{res2:.1e}) time={elapsed:.2f}s",
    )
    assert ok


def test_criterion_09_threshold_ordering(qcr_ferm1, qcr_ferm2):
    q0_single, _ = find_q0(CharModel.FERM1)
    q0_system, _ = find_q0(CharModel.FERM2)
    # final bracket half-widths after 6 bisections
    half1 = (1.8 - 1.0) / 2**6 / 2
    half2 = (3.0 - 1.5) / 2**6 / 2
    ok = q0_single > qcr_ferm1[0] + half1 and q0_system > qcr_ferm2[0] + half2
    _line(
        9,
        "q0^2 above q^2_cr",
        ok,
        f"{q0_single:.3f} > {qcr_ferm1[0]:.3f} and {q0_system:.3f} > {qcr_ferm2[0]:.3f}",
    )
    assert ok


def test_criterion_10_system_solution_shape(ferm2_string):
    report, state = ferm2_string
    g = state.phi.grid
    i0, h = g.center_index, g.spacing
    sig = state.sigma.values
    jump = abs(state.phi.values[i0 + 1] - state.phi.values[i0 - 1])
    psi = physical_pair_from_system(state).psi.values
    mismatch = abs(psi[i0 + 1] - 2 * psi[i0] + psi[i0 - 1]) / h
    checks = {
        "converged": report.terminated_by is Termination.CONVERGED,
        "sigma_edges": abs(sig[0] - 1) < 1e-2 and abs(sig[-1] - 1) < 1e-2,
        "sigma_even": np.max(np.abs(sig - sig[::-1])) < 1e-2,
        "jump>0.1": jump > 0.1,
        "smooth_removes_break": mismatch < 1e-6,
    }
    _line(
        10,
        "system solution shape",
        all(checks.values()),
        f"jump={jump:.3f} sigma(10)={sig[-1]:.5f} slope_mismatch={mismatch:.2e}",
    )
    assert all(checks.values()), checks


def test_criterion_11_kernel_invariants(default_grid):
    ones = sk.Field(default_grid, np.ones(default_grid.n_points))
    const_ok = True
    for kind, q2 in [
        (KernelKind.GAUSS, 0.0),
        (KernelKind.FERMIONIC, 0.96),
        (KernelKind.FERMIONIC, 25.0),
    ]:
        out = convolve(KernelSpec(kind, q2), ones)
        const_ok &= float(np.max(np.abs(out.values - 1.0))) < 1e-10

    pairs = -RNG.uniform(1e-3, 10.0, size=(2, 10_000))
    positivity = bool(
        np.all(kernel_weight(KernelSpec(KernelKind.HALF_AXIS), pairs[0], pairs[1]) > 0)
    )

    t = default_grid.nodes
    erf_field = sk.Field(default_grid, np.array([math.erf(x) for x in t]))
    out = convolve(KernelSpec(KernelKind.GAUSS), erf_field)
    target = np.array([math.erf(x / math.sqrt(2)) for x in t])
    erf_identity = float(np.max(np.abs(out.values - target)[np.abs(t) <= 6])) < 1e-8

    smooth = KernelSpec(KernelKind.SMOOTHING)
    f = sk.Field(default_grid, np.exp(-(t**2) / 3) * np.sin(t))
    twice = convolve(smooth, convolve(smooth, f))
    once = convolve(KernelSpec(KernelKind.GAUSS), f)
    semigroup = float(np.max(np.abs(twice.values - once.values)[np.abs(t) <= 6])) < 1e-8

    ok = const_ok and positivity and erf_identity and semigroup
    _line(
        11,
        "kernel invariant suite",
        ok,
        f"constants={const_ok} positivity={positivity} "
        f"erf_identity={erf_identity} semigroup={semigroup}",
    )
    assert ok


def test_criterion_12_large_q_limit(large_q_runs, timings):
    _, _, mm25 = large_q_runs[25.0]
    _, _, mm100 = large_q_runs[100.0]
    total = timings["largeq@25.0"] + timings["largeq@100.0"]
    checks = {
        "mismatch(25)<0.1": mm25 < 0.1,
        "mismatch(100)<mismatch(25)": mm100 < mm25,
        "runtime<300s": total < 300.0,
    }
    _line(
        12,
        "large-q oscillator limit",
        all(checks.values()),
        f"mismatch(25)={mm25:.3f} mismatch(100)={mm100:.3f} time={total:.0f}s",
    )
    assert all(checks.values()), checks
