"""Exception hierarchy shared by the geometry packages."""

from typing import Optional


class GeometryError(ValueError):
    """Base class for all errors raised by the geometry library."""


class DimensionMismatchError(GeometryError):
    """Raised when bodies or vectors live in different ambient dimensions."""

    def __init__(self, expected: int, actual: int, what: str = "input"):
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        )
        self.expected = expected
        self.actual = actual


class InvalidParameterError(GeometryError):
    """Raised when a parameter lies outside its admissible range."""


class DegenerateHullError(GeometryError):
    """Raised when facet enumeration cannot produce trustworthy facet data."""


class PreconditionError(GeometryError):
    """Raised when the precondition of an operation does not hold."""


class CertificateRefusedError(GeometryError):
    """Raised when a certifier declines to certify an instance."""

    def __init__(self, reason: str):
        super().__init__(f"Certificate refused: {reason}")
        self.reason = reason


class ConvergenceError(RuntimeError):
    """Raised when an iterative numerical method does not reach its target."""

    def __init__(self, message: str, achieved_error: Optional[float] = None):
        if achieved_error is not None:
            message = f"{message} (achieved error estimate {achieved_error:.3e})"
        super().__init__(message)
        self.achieved_error = achieved_error
