"""
Error types and classification for the crossbar laser-fault simulator.

This module defines the exception hierarchy raised by the engine modules and
a classifier that maps any exception onto an ErrorType, which the CLI turns
into a distinct exit status.
"""

from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple


class ErrorType(Enum):
    """Classification of different error types for CLI exit handling."""

    INPUT = "input"  # Bad shapes, negative currents, out-of-range targets
    DOMAIN = "domain"  # Nonpositive resistances, states outside bounds
    SOLVER = "solver"  # Singular nodal systems
    ACCURACY = "accuracy"  # Integration step too coarse
    DEGENERATE = "degenerate"  # Regression without spread in the regressor
    IDENTIFIABILITY = "identifiability"  # Rank-deficient extraction
    COVERAGE = "coverage"  # Scan plans with gaps
    CONFIG = "config"  # Invalid experiment configuration
    IO = "io"  # Filesystem failures
    INTERNAL = "internal"  # Anything unexpected


class CrossbarLFIError(Exception):
    """Base class for all errors raised by crossbar_lfi."""

    pass


class InputError(CrossbarLFIError, ValueError):
    """Raised when an operation receives malformed or out-of-range input."""

    pass


class DomainError(CrossbarLFIError, ValueError):
    """Raised when a physical quantity lies outside its valid domain."""

    pass


class SingularNetworkError(CrossbarLFIError):
    """Raised when a nodal system cannot be solved."""

    def __init__(self, message: str, node: Optional[str] = None):
        self.node = node
        super().__init__(message)


class IntegrationAccuracyError(CrossbarLFIError):
    """Raised when a single integration step moves the state too far."""

    def __init__(self, message: str, max_step_fraction: float = 0.0):
        self.max_step_fraction = max_step_fraction
        super().__init__(message)


class DegenerateDesignError(CrossbarLFIError, ValueError):
    """Raised when a regression has no spread in its regressor."""

    pass


class IdentifiabilityError(CrossbarLFIError):
    """Raised when an extraction system cannot resolve every cell."""

    def __init__(
        self, message: str, unresolved_cells: Sequence[Tuple[int, int]] = ()
    ):
        self.unresolved_cells: List[Tuple[int, int]] = sorted(unresolved_cells)
        super().__init__(message)


class CoverageGapError(CrossbarLFIError, ValueError):
    """Raised when a scan step leaves cells between footprints."""

    pass


class ConfigError(CrossbarLFIError, ValueError):
    """Raised when an experiment configuration fails validation."""

    def __init__(self, messages: Sequence[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class UnknownCommandError(CrossbarLFIError, ValueError):
    """Raised when run_command is asked for a subcommand it does not know."""

    pass


_EXIT_CODES: Dict[ErrorType, int] = {
    ErrorType.CONFIG: 2,
    ErrorType.INPUT: 3,
    ErrorType.DOMAIN: 3,
    ErrorType.SOLVER: 4,
    ErrorType.ACCURACY: 4,
    ErrorType.DEGENERATE: 5,
    ErrorType.IDENTIFIABILITY: 5,
    ErrorType.COVERAGE: 5,
    ErrorType.IO: 6,
    ErrorType.INTERNAL: 1,
}


def classify_error(error: Exception) -> ErrorType:
    """
    Classify an exception to determine how the CLI reports it.

    Args:
        error: The exception to classify

    Returns:
        ErrorType describing the failure
    """
    # Order matters: several classes also derive from ValueError
    if isinstance(error, (ConfigError, UnknownCommandError)):
        return ErrorType.CONFIG
    if isinstance(error, DomainError):
        return ErrorType.DOMAIN
    if isinstance(error, InputError):
        return ErrorType.INPUT
    if isinstance(error, SingularNetworkError):
        return ErrorType.SOLVER
    if isinstance(error, IntegrationAccuracyError):
        return ErrorType.ACCURACY
    if isinstance(error, DegenerateDesignError):
        return ErrorType.DEGENERATE
    if isinstance(error, IdentifiabilityError):
        return ErrorType.IDENTIFIABILITY
    if isinstance(error, CoverageGapError):
        return ErrorType.COVERAGE
    if isinstance(error, OSError):
        return ErrorType.IO

    return ErrorType.INTERNAL


def exit_code_for(error: Exception) -> int:
    """Map an exception to the process exit status used by the CLI."""
    return _EXIT_CODES[classify_error(error)]
