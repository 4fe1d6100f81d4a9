"""
Ideal crossbar model.

Column currents under virtual-ground sensing are I_j = sum_i V_i * G_ij with
the selector resistance folded into each cell. A photocurrent injected at the
row-side node of cell (i, j) reaches column j through a current divider
between the cell and the row-side return path:

    dI = I_inj * R_sh(I_inj) / (R_sh(I_inj) + R_ij),  R_sh(I) = r_sh0 * (1 + gamma * I)

Faults superpose: each adds its own divider term to its column.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .models.crossbar import ColumnReadout, CrossbarConfig, FaultEvent, WeightGrid
from .utils.artifacts import read_csv, write_csv
from .utils.error_handling import InputError
from .utils.validation import (
    ArrayValidator,
    ValidationResult,
    check_resistances,
    raise_if_invalid,
)

logger = logging.getLogger(__name__)

validator = ArrayValidator()


def check_grid(config: CrossbarConfig, weights: WeightGrid) -> None:
    """Raise InputError unless the grid matches the configured array size."""
    if weights.shape != (config.rows, config.cols):
        raise InputError(
            f"Weight grid is {weights.rows}x{weights.cols}, "
            f"config expects {config.rows}x{config.cols}"
        )


def check_row_voltages(config: CrossbarConfig, row_voltages: Sequence[float]) -> np.ndarray:
    voltages = np.asarray(row_voltages, dtype=float).ravel()
    result = validator.validate_length("row_voltages", voltages, config.rows)
    if result.is_valid:
        result.merge(validator.validate_finite("row_voltages", voltages))
    raise_if_invalid(result, InputError)
    return voltages


def check_faults(config: CrossbarConfig, faults: Sequence[FaultEvent]) -> None:
    result = ValidationResult()
    for fault in faults:
        result.merge(
            validator.validate_target("fault target", fault.target, config.rows, config.cols)
        )
        result.merge(validator.validate_nonnegative("injected current", fault.injected_current))
    raise_if_invalid(result, InputError)


def divider_ratio(config: CrossbarConfig, resistance: float, injected_current: float) -> float:
    """Fraction of a photocurrent that reaches the column through a cell."""
    r_sh = config.shunt_resistance(injected_current)
    return r_sh / (r_sh + resistance)


def fault_delta(config: CrossbarConfig, resistance: float, injected_current: float) -> float:
    """Column current shift caused by one fault on a cell of the given resistance."""
    return injected_current * divider_ratio(config, resistance, injected_current)


def read_scheme_voltages(config: CrossbarConfig, driven_row: int = 0) -> np.ndarray:
    """Single-row read: read_voltage on driven_row, every other row grounded."""
    if not 0 <= driven_row < config.rows:
        raise InputError(f"Driven row {driven_row} is outside 0..{config.rows - 1}")
    voltages = np.zeros(config.rows)
    voltages[driven_row] = config.read_voltage
    return voltages


def ideal_column_currents(
    config: CrossbarConfig,
    weights: WeightGrid,
    row_voltages: Sequence[float],
    label: str = "baseline",
) -> ColumnReadout:
    """Fault-free column currents under virtual-ground sensing."""
    check_grid(config, weights)
    check_resistances("cell resistances", weights.resistances)
    voltages = check_row_voltages(config, row_voltages)

    conductances = 1.0 / (weights.resistances + config.selector_on_resistance)
    currents = voltages @ conductances
    return ColumnReadout(currents, label=label)


def faulted_column_currents(
    config: CrossbarConfig,
    weights: WeightGrid,
    row_voltages: Sequence[float],
    faults: Sequence[FaultEvent],
    label: str = "faulted",
) -> ColumnReadout:
    """Baseline currents plus the divider contribution of every fault."""
    check_faults(config, faults)
    baseline = ideal_column_currents(config, weights, row_voltages)
    currents = np.array(baseline.currents)
    for fault in faults:
        row, col = fault.target
        currents[col] += fault_delta(
            config, weights.resistance(row, col), fault.injected_current
        )
    logger.debug(f"Applied {len(faults)} fault(s) to the ideal model")
    return ColumnReadout(currents, label=label)


def delta_current(baseline: ColumnReadout, faulted: ColumnReadout) -> np.ndarray:
    """Per-column difference faulted - baseline."""
    if len(baseline) != len(faulted):
        raise InputError(
            f"Readouts have different lengths ({len(baseline)} vs {len(faulted)})"
        )
    return faulted.currents - baseline.currents


def random_weight_grid(
    rows: int,
    cols: int,
    seed: int,
    low: float = 5e3,
    high: float = 20e3,
) -> WeightGrid:
    """Uniformly distributed resistances, reproducible from the seed."""
    if not 0 < low < high:
        raise InputError(f"Resistance range must satisfy 0 < low < high, got [{low}, {high}]")
    rng = np.random.default_rng(seed)
    return WeightGrid(rng.uniform(low, high, size=(rows, cols)))


def grid_for_config(config: CrossbarConfig, seed: int) -> WeightGrid:
    return random_weight_grid(config.rows, config.cols, seed, config.r_min, config.r_max)


def save_weight_grid(path: Union[str, Path], weights: WeightGrid) -> Path:
    return write_csv(path, weights.to_frame())


def load_weight_grid(path: Union[str, Path]) -> WeightGrid:
    return WeightGrid.from_frame(read_csv(path))


def save_readout(path: Union[str, Path], readout: ColumnReadout) -> Path:
    return write_csv(path, readout.to_frame())


def load_readout(path: Union[str, Path], label: Optional[str] = None) -> ColumnReadout:
    return ColumnReadout.from_frame(read_csv(path), label=label or Path(path).stem)
