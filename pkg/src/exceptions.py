"""Custom exceptions for multivariate RD estimation."""

from typing import Optional


class MultivariateRDError(Exception):
    """Base exception for multivariate RD estimation."""


class ConfigurationError(MultivariateRDError):
    """Configuration-related errors."""


class MissingConfigError(ConfigurationError):
    """Required configuration is missing."""


class InvalidConfigError(ConfigurationError):
    """Configuration is invalid."""


class InputError(MultivariateRDError):
    """Usage or input errors (CLI exit code 1)."""


class MalformedInputError(InputError):
    """Input table is malformed."""

    def __init__(
        self,
        message: str,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ):
        super().__init__(message)
        self.row = row
        self.column = column


class InvalidArgumentError(InputError):
    """An argument is outside its admissible range."""


class UnknownDesignError(InputError):
    """Simulation design id is not known."""


class OutOfSupportError(InputError):
    """Point lies outside the design support."""


class GeometryError(MultivariateRDError):
    """Geometry-related errors."""


class InvalidFrameError(GeometryError):
    """Boundary frame is not a right-handed orthonormal basis."""


class KernelError(MultivariateRDError):
    """Kernel-related errors."""


class KernelUnsuitableError(KernelError):
    """Kernel cannot be used (singular moments or restriction violated)."""


class EstimationError(MultivariateRDError):
    """Numerical estimation errors (CLI exit code 2)."""


class InsufficientLocalDataError(EstimationError):
    """Too few records or a singular design near the boundary point."""

    def __init__(
        self,
        message: str,
        side: Optional[str] = None,
        effective_n: Optional[int] = None,
        condition: Optional[float] = None,
    ):
        super().__init__(message)
        self.side = side
        self.effective_n = effective_n
        self.condition = condition

    def to_dict(self) -> dict:
        """Structured error record."""
        return {
            "side": self.side,
            "effective_n": self.effective_n,
            "condition": self.condition,
        }


class DegenerateSelectionError(EstimationError):
    """Bandwidth selection inputs carry no information."""
