"""Exception hierarchy shared by all ultrakernel modules."""


class UltrakernelError(Exception):
    """Base class for every error raised by this package."""


class DomainError(UltrakernelError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class RangeError(UltrakernelError, OverflowError):
    """A result is not representable as a finite double."""


class AccuracyError(UltrakernelError, ArithmeticError):
    """The chosen numerical scheme cannot deliver a meaningful answer."""


class ConvergenceError(UltrakernelError, ArithmeticError):
    """A series is not absolutely summable for the given parameters."""


class SingularConfigurationError(DomainError):
    """The kernel is infinite, or its integral form is unavailable, at r = +-1.

    Raised when ``nu < lambda <= nu + 1`` and the boundary value of ``r``
    is requested.
    """


class DiracCaseError(DomainError):
    """The projection measure degenerates to a point mass; no density exists."""
