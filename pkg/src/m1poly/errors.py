"""Exception types raised across the package."""


class M1PolyError(Exception):
    """Base class for all errors raised by m1poly."""


class DomainError(M1PolyError, ValueError):
    """Argument outside the support or admissible parameter region."""


class PoleError(M1PolyError, ZeroDivisionError):
    """A Gamma function or denominator parameter hit a pole."""


class ConvergenceError(M1PolyError, ArithmeticError):
    """A non-terminating series did not reach its tail tolerance."""


class SeriesOverflowError(M1PolyError, OverflowError):
    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"{message} (at index {index})")
        self.index = index


class TruncationError(M1PolyError, ValueError):
    """No supported truncation condition holds for Bannai-Ito parameters."""


class PositivityError(M1PolyError, ValueError):
    def __init__(self, message, indices=()):
        super().__init__(f"{message}: offending indices {list(indices)}")
        self.indices = tuple(indices)


class ConstraintError(M1PolyError, ValueError):
    """Coupling labels violate their linear constraints."""
