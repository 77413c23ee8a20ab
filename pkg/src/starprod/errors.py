"""Exception hierarchy shared by the algebra, calculus and CLI layers."""


class AlgebraError(Exception):
    """Base class for all algebraic failures."""


class DomainError(AlgebraError):
    """An argument is outside the domain of the operation (bad grade, index, ...)."""


class DivisibilityError(AlgebraError):
    """An exact division was requested that does not exist in the ring."""


class NotSplittableError(AlgebraError):
    """The element does not star-square to a constant scalar."""


class IrrationalEigenvalueError(AlgebraError):
    """The star-square is a constant but has no exact square root."""


class IntegrationDivergedError(RuntimeError):
    """The numerical integrator produced a non-finite state.

    Carries the last valid sample so callers can inspect where it blew up.
    """

    def __init__(self, message, last_sample=None):
        super().__init__(message)
        self.last_sample = last_sample


class ParseError(ValueError):
    """Syntax error in the expression language; carries position info."""

    def __init__(self, message, line=1, column=0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += " (expected " + " | ".join(expected) + ")"
        super().__init__(detail)


class EvalError(RuntimeError):
    """Evaluation of a syntactically valid expression failed."""
