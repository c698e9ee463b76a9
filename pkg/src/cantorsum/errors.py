"""Exception hierarchy shared by every module."""


class CantorSumError(Exception):
    """Base class for all package errors."""


class EmptySystem(CantorSumError, ValueError):
    pass


class RatioOutOfRange(CantorSumError, ValueError):
    pass


class InvalidOrientation(CantorSumError, ValueError):
    pass


class NoConvergence(CantorSumError, ArithmeticError):
    pass


class InvalidDigit(CantorSumError, IndexError):
    pass


class OrientationMismatch(CantorSumError, ValueError):
    pass


class NoSharedSquare(CantorSumError, ValueError):
    pass


class EpsilonTooLarge(CantorSumError, ValueError):
    pass


class SearchExhausted(CantorSumError):
    """A bounded search closed its state space without a solution."""


class BudgetExceeded(CantorSumError):
    """Enumeration hit a resource cap before reaching the requested scale."""

    def __init__(self, message, depth_reached=0):
        super().__init__(message)
        self.depth_reached = depth_reached


class WitnessUnavailable(CantorSumError):
    pass


class CertificateError(CantorSumError):
    """A constructed object failed its own exact re-verification."""


class DomainError(CantorSumError, ValueError):
    pass


class NonpositiveEta(DomainError):
    pass


class DegenerateSystem(CantorSumError, ValueError):
    """The attractor is a single point (one map)."""


class ParseError(CantorSumError, ValueError):
    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.field = field
        self.line = line
