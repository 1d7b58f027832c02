"""Exception hierarchy shared by every module of the engine."""


class SolitonError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(SolitonError, ZeroDivisionError):
    pass


class PoleAtPoint(SolitonError):
    """A rational function was evaluated at a root of its denominator."""

    def __init__(self, value, point):
        super().__init__(f"{value} has a pole at n = {point}")
        self.point = point


class SingularMatrix(SolitonError):
    pass


class InconsistentSystem(SolitonError):
    """The solution of a restricted system does not satisfy the full system."""


class ZeroPolynomial(SolitonError):
    pass


class DomainError(SolitonError, ValueError):
    pass


class AssumptionNotAsserted(SolitonError):
    pass


class UnsupportedDegree(SolitonError):
    pass


class ConfigError(SolitonError, ValueError):
    pass


class UsageError(SolitonError, ValueError):
    """Malformed command line."""
