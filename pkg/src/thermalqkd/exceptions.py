"""Exception hierarchy for thermalqkd."""


class ThermalQKDError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ThermalQKDError, ValueError):
    """An argument lies outside the domain of the function."""


class PhysicalityError(ThermalQKDError, ValueError):
    """A covariance matrix violates the uncertainty principle or is not symmetric."""


class SingularityError(ThermalQKDError, ValueError):
    """A homodyne measurement was requested on a quadrature with vanishing variance."""


class NumericError(ThermalQKDError, ArithmeticError):
    """The eigensolver failed, or produced a spectrum that cannot be paired."""


class BracketError(ThermalQKDError, ValueError):
    """A root could not be bracketed inside the allowed search range."""
