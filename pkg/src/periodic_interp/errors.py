"""Exception hierarchy shared by every module of the package."""


class PeriodicInterpError(Exception):
    """Base class for all package errors."""


class DomainError(PeriodicInterpError, ValueError):
    """An argument lies outside the supported mathematical domain."""


class ConvergenceError(PeriodicInterpError, ArithmeticError):
    """A series could not be certified to the requested tolerance."""


class NumericError(PeriodicInterpError, ArithmeticError):
    """A numerical procedure broke down (singular pivot, lost root, ...)."""


class DataError(PeriodicInterpError, ValueError):
    """Malformed sample input."""
