"""Exception types shared across the package."""


class MhsError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(MhsError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(MhsError, ValueError):
    """A parameter point lies outside the family's chart domain."""


class SingularPointError(MhsError):
    """The parametrization is degenerate at the requested point."""


class OutOfWindowError(MhsError):
    """Energy outside the oscillatory window of the profile ODE."""


class IntegrationFailureError(MhsError):
    """The ODE integrator failed to reach the requested state."""


class NoSolutionError(MhsError):
    """No profile curve exists for the requested rotation number."""


class ConvergenceError(MhsError):
    """Iterative root finding stagnated before reaching tolerance."""


class GenerationFailedError(MhsError):
    """A generated surface failed its minimality self-check."""


class DegenerateElementError(MhsError):
    """A mesh triangle has (numerically) zero area."""


class MeshFormatError(MhsError, ValueError):
    """A mesh JSON document violates the interchange schema."""


class NumericalFailureError(MhsError):
    """An eigenvalue solve or factorization broke down."""


class ShiftRetryExhaustedError(NumericalFailureError):
    """The shifted matrix stayed singular after jitter retries."""


class MultiplicityWarningError(NumericalFailureError):
    """The computed ground state changes sign; the lowest eigenvalue is
    probably not resolved as simple at this resolution."""
