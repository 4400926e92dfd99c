"""Finite-difference laboratory for a 1-D chemotaxis system with
logarithmic sensitivity, written in Cole-Hopf variables, under
time-dependent Dirichlet boundary data."""

from .diagnostics import (
    DiagnosticsRecord,
    discrete_norms,
    fisher_dissipation,
    lyapunov_value,
    relative_entropy,
    steady_state_residual,
    v_mass,
)
from .kernels import BACKEND, Forcing, available_backends
from .model import (
    MODE_EPS_POSITIVE,
    MODE_EPS_ZERO,
    MODES,
    BoundarySignal,
    BoundarySpec,
    ChemicalField,
    DomainError,
    Grid,
    HyperbolicityLossError,
    ModelParams,
    State,
    characteristic_speeds,
    cole_hopf_forward,
    cole_hopf_inverse,
    eval_signal,
    perturbation,
    reference_profiles,
    rescaling_factors,
)
from .scenarios import (
    PRESET_NAMES,
    Expectation,
    InitialData,
    ManufacturedSolution,
    OrderStudy,
    Scenario,
    evaluate_expectations,
    mms_preset,
    preset,
    spatial_order_study,
    temporal_order_study,
)
from .solver import (
    CompatibilityWarning,
    ConfigurationError,
    CourantWarning,
    InstabilityError,
    PositivityLossError,
    SchemeConfig,
    SolverAbort,
    StepReport,
    Trajectory,
    make_grid,
    run,
    step_eps_positive,
    step_eps_zero,
)

__version__ = "0.1.0"
