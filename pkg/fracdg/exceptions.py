"""Exception hierarchy for the fractional DG solver."""

from __future__ import annotations


class FracDGError(Exception):
    """Base class for all solver errors."""


class DomainError(FracDGError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class DimensionError(FracDGError, ValueError):
    """Vectors and operators of incompatible sizes."""


class ConfigError(FracDGError, ValueError):
    """Invalid run or sweep configuration."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericalError(FracDGError, ArithmeticError):
    """Numerical failure: singular system, non-finite value, no convergence."""
