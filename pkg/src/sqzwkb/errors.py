"""Exception hierarchy shared by the numerical modules."""


class SqzWkbError(Exception):
    """Base class for all package errors."""


class ConvergenceError(SqzWkbError):
    """An iterative scheme (root finding, adaptive integration) did not converge."""

    def __init__(self, message, achieved_error=None):
        super().__init__(message)
        self.achieved_error = achieved_error


class ForbiddenRegionError(SqzWkbError, ValueError):
    """A semiclassical quantity was requested beyond the classical turning point."""


class TurningPointError(ForbiddenRegionError):
    """WKB wavefunction requested inside the turning-point guard band."""


class DegenerateSqueezingError(SqzWkbError, ValueError):
    """r = 0: the Fock and squeezed rings coincide, no isolated crossing exists."""


class NoCrossingError(SqzWkbError, ValueError):
    """The Fock ring and the squeezed ring do not intersect."""


class TangencyError(SqzWkbError):
    """The two classical bands touch instead of crossing; the overlap area diverges."""


class RecurrenceInstabilityError(SqzWkbError):
    """Loss of precision detected in a recurrence; callers should fall back to quadrature."""


class IncompatibleDistributionError(SqzWkbError, ValueError):
    """Two distributions with different (n, r) were compared."""


class RangeTooShortError(SqzWkbError, ValueError):
    """The index range does not contain the requested feature."""


class QuadratureOrderError(SqzWkbError, ValueError):
    """Requested quadrature order exceeds the configured cap."""
