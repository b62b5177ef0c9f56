"""Solvers for one-dimensional nonlinear Gaussian-convolution integral equations.

The package reproduces kink solutions of the p-adic string model, the
interpolating/periodic regime structure of the fermionic-string equations,
their characteristic-equation thresholds, and the large-coupling oscillator
limit.
"""

from .grids import (
    Field,
    Grid,
    SeedKind,
    make_grid,
    parity_violation,
    read_field_csv,
    sample_profile,
    sup_diff,
    write_field_csv,
)
from .kernels import (
    DEFAULT_WINDOW,
    KernelKind,
    KernelSpec,
    auto_window,
    convolve,
    kernel_weight,
    step_convolution,
)
from .solvers import (
    DivisionNearZero,
    IterationConfig,
    Model,
    SolveReport,
    SystemState,
    Termination,
    cbrt_signed,
    default_config,
    residual,
    solve_ferm1,
    solve_ferm2,
    solve_padic,
    solve_padic_half,
)
from .regime import (
    DeviationProfile,
    Regime,
    RegimeKind,
    classify,
    deviation_profile,
    find_qcr,
    geometric_fit,
)
from .spectral import (
    CharModel,
    ComplexRoot,
    RootFindError,
    char_value,
    continue_root,
    find_omega,
    find_q0,
)
from .asymptotics import (
    NotPeriodic,
    OscillatorOrbit,
    UnboundedOrbit,
    large_q_comparison,
    oscillator_orbit,
    rescale_field,
)
from .physical import (
    PhysicalPair,
    SolveFailed,
    compare_models,
    physical_pair_from_single,
    physical_pair_from_system,
    q_squared_string,
    smooth_field,
)

__version__ = "0.1.0"
