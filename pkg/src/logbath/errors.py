"""Exception hierarchy shared by every module."""


class LogBathError(Exception):
    pass


class DomainError(LogBathError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedKindError(LogBathError, TypeError):
    """The operation is not defined for this kind of spectral density."""


class PreconditionError(LogBathError, ValueError):
    """A stated applicability condition (decay exponent, time window, ...) fails."""


class DivergenceError(LogBathError, ArithmeticError):
    pass


class ToleranceError(LogBathError, ArithmeticError):
    """Quadrature finished without reaching the requested accuracy."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class TauRangeError(PreconditionError):
    pass


class ExpansionExhaustedError(LogBathError, ValueError):
    """Every term of a truncated low-frequency expansion was skipped."""


class OutOfStripError(DomainError):
    """A Mellin argument lies outside the convergence strip."""
