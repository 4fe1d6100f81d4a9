"""
Validation utilities for crossbar simulations.

Provides reusable checks for array shapes, resistances, fault targets and
injected currents. Checks accumulate into a ValidationResult so that a caller
sees every problem at once; raise_if_invalid converts a failed result into
the typed error the operation documents.
"""

import logging
import math
from typing import Any, List, Optional, Sequence, Tuple, Type

import numpy as np

from .error_handling import CrossbarLFIError, DomainError, InputError

logger = logging.getLogger(__name__)


class ValidationResult:
    """Result of a validation operation."""

    def __init__(
        self,
        is_valid: bool = True,
        errors: Optional[List[str]] = None,
        warnings: Optional[List[str]] = None,
    ):
        self.is_valid = is_valid
        self.errors = errors or []
        self.warnings = warnings or []

    def __str__(self) -> str:
        if self.is_valid:
            return "Validation passed"
        return f"Validation failed: {', '.join(self.errors)}"

    def add_error(self, error: str) -> None:
        """Add an error to the validation result."""
        self.errors.append(error)
        self.is_valid = False

    def add_warning(self, warning: str) -> None:
        """Add a warning to the validation result."""
        self.warnings.append(warning)

    def merge(self, other: "ValidationResult") -> None:
        """Merge another validation result into this one."""
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)
        if not other.is_valid:
            self.is_valid = False


def raise_if_invalid(
    result: ValidationResult, error_cls: Type[CrossbarLFIError] = InputError
) -> None:
    """Raise error_cls carrying every accumulated message if result failed."""
    for warning in result.warnings:
        logger.warning(warning)
    if not result.is_valid:
        raise error_cls("; ".join(result.errors))


class ArrayValidator:
    """Checks shared by the crossbar, laser and attack operations."""

    def validate_length(
        self, field_name: str, values: Sequence[Any], expected: int
    ) -> ValidationResult:
        """Validate that a vector has the expected length."""
        if len(values) != expected:
            return ValidationResult(
                False,
                [f"{field_name} has length {len(values)}, expected {expected}"],
            )
        return ValidationResult(True)

    def validate_finite(self, field_name: str, values: Any) -> ValidationResult:
        """Validate that every entry is a finite number."""
        array = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(array)):
            return ValidationResult(False, [f"{field_name} must be finite"])
        return ValidationResult(True)

    def validate_positive_resistances(
        self, field_name: str, resistances: Any
    ) -> ValidationResult:
        """Validate that every resistance is finite and strictly positive."""
        array = np.asarray(resistances, dtype=float)
        result = self.validate_finite(field_name, array)
        if not result.is_valid:
            return result

        bad = np.argwhere(array <= 0.0)
        if bad.size:
            first = tuple(int(k) for k in bad[0])
            return ValidationResult(
                False,
                [
                    f"{field_name} must be strictly positive "
                    f"({len(bad)} nonpositive, first at {first})"
                ],
            )
        return ValidationResult(True)

    def validate_nonnegative(self, field_name: str, value: float) -> ValidationResult:
        """Validate that a scalar is finite and not negative."""
        if not math.isfinite(value) or value < 0.0:
            return ValidationResult(False, [f"{field_name} must be >= 0, got {value}"])
        return ValidationResult(True)

    def validate_target(
        self, field_name: str, target: Tuple[int, int], rows: int, cols: int
    ) -> ValidationResult:
        """Validate that a (row, col) index lies inside a rows x cols array."""
        row, col = target
        if not (0 <= row < rows and 0 <= col < cols):
            return ValidationResult(
                False,
                [f"{field_name} {target} is outside the {rows}x{cols} array"],
            )
        return ValidationResult(True)


def check_resistances(field_name: str, resistances: Any) -> None:
    """Raise DomainError unless all resistances are finite and positive."""
    raise_if_invalid(
        ArrayValidator().validate_positive_resistances(field_name, resistances),
        DomainError,
    )
