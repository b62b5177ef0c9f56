import math

import numpy as np
import pytest
from scipy.integrate import quad

import stringkink as sk
from stringkink.kernels import (
    KernelKind,
    KernelSpec,
    _convolve_values,
    _stencil,
    auto_window,
    convolve,
    kernel_weight,
    step_convolution,
)

RNG = np.random.default_rng(7041)
GRID = sk.make_grid(-10, 10, 2001)
HALF = sk.make_grid(-10, 0, 1001)


def test_kernel_weight_formulas():
    gauss = KernelSpec(KernelKind.GAUSS)
    assert kernel_weight(gauss, 3.7, 3.7) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    half = KernelSpec(KernelKind.HALF_AXIS)
    assert kernel_weight(half, -2.3, 0.0) == 0.0
    assert kernel_weight(half, 0.0, -1.1) == 0.0
    # direct evaluation of the odd-sector kernel at (-1, -1)
    assert kernel_weight(half, -1.0, -1.0) == pytest.approx(
        (1 - math.exp(-4)) / math.sqrt(math.pi), rel=1e-14
    )
    ferm = KernelSpec(KernelKind.FERMIONIC, 0.7)
    u = 0.9
    expect = math.exp(-u * u) * (1 + 2 * 0.7 * (1 - 2 * u * u)) / math.sqrt(math.pi)
    assert kernel_weight(ferm, u, 0.0) == pytest.approx(expect, rel=1e-15)
    smooth = KernelSpec(KernelKind.SMOOTHING)
    assert kernel_weight(smooth, 1.0, 1.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        KernelSpec(KernelKind.GAUSS, window=0.0)
    with pytest.raises(ValueError):
        KernelSpec(KernelKind.FERMIONIC, q_squared=-0.5)


@pytest.mark.parametrize(
    "kind,q2",
    [
        (KernelKind.GAUSS, 0.0),
        (KernelKind.FERMIONIC, 0.0),
        (KernelKind.FERMIONIC, 0.96),
        (KernelKind.FERMIONIC, 100.0),
        (KernelKind.SMOOTHING, 0.0),
    ],
)
def test_stencil_normalization(kind, q2):
    w, _ = _stencil(kind, q2, 10.0, 0.01)
    assert abs(float(np.sum(w)) - 1.0) < 1e-10


def test_convolve_preserves_constants_everywhere():
    for kind, q2 in [
        (KernelKind.GAUSS, 0.0),
        (KernelKind.FERMIONIC, 0.96),
        (KernelKind.SMOOTHING, 0.0),
    ]:
        out = convolve(KernelSpec(kind, q2), sk.Field(GRID, np.ones(2001)))
        assert np.max(np.abs(out.values - 1.0)) < 1e-10


def test_gauss_on_erf_is_erf_rescaled():
    # closed form: the Gaussian with variance 1/2 maps erf(t) to erf(t/sqrt(2))
    f = sk.Field(GRID, np.array([math.erf(x) for x in GRID.nodes]))
    out = convolve(KernelSpec(KernelKind.GAUSS), f)
    target = np.array([math.erf(x / math.sqrt(2)) for x in GRID.nodes])
    inner = np.abs(GRID.nodes) <= 6
    assert np.max(np.abs(out.values - target)[inner]) < 1e-8


def test_gauss_on_erf_spot_checked_by_quadrature():
    f = sk.Field(GRID, np.array([math.erf(x) for x in GRID.nodes]))
    out = convolve(KernelSpec(KernelKind.GAUSS), f)
    for tv in (0.5, 1.5):
        ref, err = quad(
            lambda s: math.exp(-((tv - s) ** 2)) / math.sqrt(math.pi) * math.erf(s),
            tv - 10,
            tv + 10,
            limit=200,
        )
        assert err < 1e-8
        i = int(np.argmin(np.abs(GRID.nodes - tv)))
        assert out.values[i] == pytest.approx(ref, abs=1e-8)


def test_fermionic_on_erf_closed_form():
    # K_q erf = (1 - q^2 d^2/dt^2) erf(t/sqrt 2)
    q2 = 0.96
    f = sk.Field(GRID, np.array([math.erf(x) for x in GRID.nodes]))
    out = convolve(KernelSpec(KernelKind.FERMIONIC, q2), f)
    t = GRID.nodes
    target = np.array([math.erf(x / math.sqrt(2)) for x in t])
    target += q2 * math.sqrt(2 / math.pi) * t * np.exp(-(t**2) / 2)
    assert np.max(np.abs(out.values - target)[np.abs(t) <= 6]) < 1e-10


def test_fermionic_reduces_to_gauss_at_zero_coupling():
    v = RNG.normal(size=2001)
    f = sk.Field(GRID, v)
    a = convolve(KernelSpec(KernelKind.FERMIONIC, 0.0), f)
    b = convolve(KernelSpec(KernelKind.GAUSS), f)
    assert np.array_equal(a.values, b.values)


def test_step_convolution_closed_forms():
    t = GRID.nodes
    erf_t = np.array([math.erf(x) for x in t])
    out = step_convolution(KernelSpec(KernelKind.GAUSS), GRID)
    assert np.max(np.abs(out.values + erf_t)) < 1e-12
    q2 = 1.3
    out = step_convolution(KernelSpec(KernelKind.FERMIONIC, q2), GRID)
    target = -erf_t - (4 * q2 / math.sqrt(math.pi)) * t * np.exp(-(t**2))
    assert np.max(np.abs(out.values - target)) < 1e-12
    out = step_convolution(KernelSpec(KernelKind.SMOOTHING), GRID)
    target = -np.array([math.erf(math.sqrt(2) * x) for x in t])
    assert np.max(np.abs(out.values - target)) < 1e-12
    out = step_convolution(KernelSpec(KernelKind.HALF_AXIS), HALF)
    target = -np.array([math.erf(x) for x in HALF.nodes])
    assert np.max(np.abs(out.values - target)) < 1e-12


def test_sampled_step_quadrature_is_h2_limited():
    # node quadrature across the jump cannot beat O(h^2); the closed-form
    # path exists precisely because of this floor
    f = sk.sample_profile(sk.SeedKind.STEP, GRID)
    out = convolve(KernelSpec(KernelKind.GAUSS), f)
    exact = step_convolution(KernelSpec(KernelKind.GAUSS), GRID)
    err = sk.sup_diff(out, exact)
    assert 1e-7 < err < 1e-4


def test_half_axis_operator_on_constant_matches_closed_form():
    out = _convolve_values(KernelSpec(KernelKind.HALF_AXIS), HALF, np.ones(1001))
    target = -np.array([math.erf(x) for x in HALF.nodes])
    assert np.max(np.abs(out - target)) < 1e-9
    assert out[-1] == 0.0  # K_-(0, .) vanishes identically


def test_half_axis_requires_grid_ending_at_zero():
    with pytest.raises(ValueError):
        convolve(KernelSpec(KernelKind.HALF_AXIS), sk.Field(GRID, np.ones(2001)))


def test_half_axis_positivity_on_random_negative_pairs():
    spec = KernelSpec(KernelKind.HALF_AXIS)
    t = -RNG.uniform(1e-3, 10, size=10_000)
    tp = -RNG.uniform(1e-3, 10, size=10_000)
    assert np.all(kernel_weight(spec, t, tp) > 0)


def test_half_axis_monotone_in_the_field():
    spec = KernelSpec(KernelKind.HALF_AXIS)
    for _ in range(10):
        f = RNG.uniform(0, 1, size=1001)
        g = f + RNG.uniform(0, 1, size=1001)
        out_f = _convolve_values(spec, HALF, f)
        out_g = _convolve_values(spec, HALF, g)
        assert np.all(out_g - out_f >= -1e-14)


def test_convolution_linearity():
    f = RNG.normal(size=2001)
    g = RNG.normal(size=2001)
    a, b = 1.7, -0.3
    spec = KernelSpec(KernelKind.FERMIONIC, 0.5)
    lhs = _convolve_values(spec, GRID, a * f + b * g)
    rhs = a * _convolve_values(spec, GRID, f) + b * _convolve_values(spec, GRID, g)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_discrete_operator_identity():
    # second differences of (-q^2 d^2 + 1) applied to K f match K_q f to O(h^2)
    q2 = 0.96
    t = GRID.nodes
    f = np.exp(-(t**2) / 2)
    kf = _convolve_values(KernelSpec(KernelKind.GAUSS), GRID, f)
    h = GRID.spacing
    d2 = np.zeros_like(kf)
    d2[1:-1] = (kf[2:] - 2 * kf[1:-1] + kf[:-2]) / h**2
    lhs = -q2 * d2 + kf
    rhs = _convolve_values(KernelSpec(KernelKind.FERMIONIC, q2), GRID, f)
    inner = np.abs(t) < 8
    assert np.max(np.abs(lhs - rhs)[1:-1][inner[1:-1]]) < 1e-4


def test_convolve_parity_equivariance_is_exact():
    v = RNG.normal(size=1000)
    odd = np.concatenate([v, [0.0], -v[::-1]])
    f = sk.Field(GRID, odd)
    out = convolve(KernelSpec(KernelKind.FERMIONIC, 1.3), f)
    assert sk.parity_violation(out) == 0.0


def test_auto_window():
    w = auto_window(1e-12)
    assert 5.0 <= w <= 5.3
    assert math.erfc(w) < 1e-12
    assert math.erfc(w - 0.01) >= 1e-12  # smallest such width
    assert auto_window(0.5) < 1.0
    assert auto_window(1e-14) >= auto_window(1e-10) >= auto_window(1e-4)
    for bad in (0.0, 1.0, 1.5, -0.1):
        with pytest.raises(ValueError):
            auto_window(bad)


def test_auto_window_tail_mass_against_quadrature():
    w = auto_window(1e-10)
    tail, _ = quad(lambda u: 2 * math.exp(-(u**2)) / math.sqrt(math.pi), w, w + 6)
    # neglected mass sits right at the requested tolerance (5% oracle slack)
    assert tail <= 1.05e-10
    assert tail >= 0.90e-10
