"""Exceptions raised by mini-gpopt."""
from typing import Optional


class GPOptError(Exception):
    """Base class for all library errors"""


class ConfigurationError(GPOptError, ValueError):
    """A parameter or configuration value is outside its valid range"""


class UsageError(GPOptError, ValueError):
    """Inputs are malformed (shape mismatch, empty sets, too few runs)"""


class NumericalError(GPOptError, ArithmeticError):
    """
    A numerical routine failed.

    Attributes:
        pivot: 1-based index of the leading minor that was not positive definite
        value: Offending value (e.g. a negative posterior variance)
    """

    def __init__(
        self,
        message: str,
        pivot: Optional[int] = None,
        value: Optional[float] = None
    ):
        super().__init__(message)
        self.pivot = pivot
        self.value = value
