"""Exception hierarchy shared by all nilflow modules.

PreconditionError subclasses signal bad inputs or violated contracts
(CLI exit code 2); NumericFailure subclasses signal runaway or
degenerate computations (CLI exit code 3).
"""


class NilflowError(Exception):
    pass


class PreconditionError(NilflowError):
    pass


class NumericFailure(NilflowError):
    pass


class IncompatibleMetric(PreconditionError):
    """Metric coefficients violate a13*a34 == a12*a24."""


class SingularOrbit(PreconditionError):
    """Orbit label with k1*k2 == 0; the canonical chart is undefined."""


class ChartMismatch(PreconditionError):
    """Point does not lie on the orbit the chart was built for."""


class NonpositiveAlphaSquared(PreconditionError):
    """Parameter reduction produced alpha^2 <= 0."""


class GridMismatch(PreconditionError):
    """Horizon is not an integer multiple of the step size."""


class InsufficientZeros(PreconditionError):
    """Too few zero crossings in the window to estimate a phase."""


class NonDecayingProfile(PreconditionError):
    """Potential profile does not decay to zero at late times."""


class PhaseNearSingular(NumericFailure):
    """Phase angle too close to 0 or pi for cot(B) to be meaningful."""


class NonfiniteState(NumericFailure):
    """Integration produced an overflow, inf, or nan."""


class SuspectedDoubleZero(NumericFailure):
    """Sign change with near-zero slope: bisection cannot separate roots."""


class TrajectoryEscape(NumericFailure):
    """Trajectory left the bounded region the experiment assumes."""
