"""Euler flows on the dual of the triangular nilpotent Lie algebra and
the numerics of their homoclinic splitting."""

from .dynamics import (
    ExtendedState,
    PhasePoint4,
    PotentialProfile,
    SeparatrixCoords,
    TimeGrid,
    extended_hamiltonian,
    field_X_eps,
    hypothesis_check,
    sech_squared_profile,
    separatrix_state,
    variational_solutions,
    zero_profile,
)
from .integrators import (
    StepperConfig,
    Trajectory,
    ZeroRecord,
    forest_ruth_integrate,
    locate_zeros,
    rk4_integrate,
)
from .lie_poisson import (
    ChartPoint,
    CoadjointPoint,
    DiagonalMetric,
    OrbitId,
    ReducedParams,
    casimirs,
    chart_from_canonical,
    chart_to_canonical,
    euler_field,
    hamiltonian,
    poisson_bracket,
    reduce_params,
)
from .melnikov import (
    MelnikovResult,
    PhaseAngle,
    PhaseConfig,
    melnikov_full_line,
    melnikov_legendre_substitution,
    melnikov_limit,
    melnikov_m,
    melnikov_quadrature,
    phase_angle,
    verify_splitting,
)

__version__ = "0.1.0"
