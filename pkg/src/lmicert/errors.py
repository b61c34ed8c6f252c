"""Exception types shared across the package."""

from __future__ import annotations


class LmicertError(Exception):
    """Base class for all structured errors raised by this package."""


class DimensionMismatch(LmicertError):
    """A point, direction, or matrix has the wrong ambient dimension."""


class ZeroPolynomialError(LmicertError):
    """An operation that needs a nonzero polynomial received zero."""


class ParseError(LmicertError):
    """A text document (polynomial or pencil file) is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BasePointError(LmicertError):
    """The base point violates a sign precondition (p(x0) must be > 0,
    or nonzero for the hyperbolicity bridge)."""


class ReductionError(LmicertError):
    """Monic reduction failed: L0 not PSD, 0 not interior, the range
    condition is violated, or no exact rational normalization exists."""


class CertifiedNotRZError(LmicertError):
    """An operation requiring a (probably) real-zero input received one
    that is certifiably not.  Carries the failing-line verdict."""

    def __init__(self, message: str, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class ConstructionError(LmicertError):
    """Pencil construction failed; carries the best residual achieved."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message)
