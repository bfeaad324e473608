"""Fourier spectral Galerkin solver for the fractional Zakharov-Kuznetsov
equation on a 2D periodic domain, with integrating-factor RK4 time stepping,
invariant diagnostics, and a reproducible experiment harness."""

__version__ = "0.1.0"

from .diagnostics import (
    ErrorRow,
    ErrorTable,
    InvariantRecord,
    SolitonSpec,
    conservation_drift,
    exact_soliton,
    hamiltonian,
    l2_error,
    linf_error,
    mass,
    momentum,
    observed_orders,
)
from .experiments import (
    ConstantField,
    CosineMode,
    RunConfig,
    RunResult,
    convergence_study,
    initial_field,
    oracle_check,
    run_simulation,
    soliton_interaction_study,
    temporal_order_study,
)
from .grid import (
    Discretization,
    RealField,
    SpectralField,
    WavenumberTable,
    build_discretization,
    forward_transform,
    grid_points,
    inverse_transform,
    random_spectral_field,
    wavenumbers,
)
from .operators import (
    DiagonalOperator,
    NonlinearWorkspace,
    apply_fractional,
    linear_symbol,
    nonlinear_term,
    nonlinear_term_oracle,
    rhs,
)
from .stepping import (
    StepPolicy,
    StepperState,
    default_dt,
    integrate,
    max_stable_dt,
    phase_factor,
    stability_function,
    step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
