"""
Crossbar Data Models

Data models for the 1T1R crossbar: electrical configuration, stored weights,
injected faults and column readouts. All quantities are SI (A, V, ohm).
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Tuple

import numpy as np
import pandas as pd

from ..utils.error_handling import DomainError, InputError

INJECTION_NODE_ROW_SIDE = "row-side"
VIRTUAL_GROUND = "virtual-ground"


@dataclass(frozen=True)
class CrossbarConfig:
    """
    Electrical configuration of a crossbar and its injection path.

    The row-side return path seen from an injection node is an effective
    resistance r_sh0 * (1 + gamma * I). The selector resistance is folded into
    every cell for baseline currents; the fault divider uses the memristor
    resistance alone.
    """

    rows: int = 256
    cols: int = 128
    read_voltage: float = 0.2  # volts on the driven row
    shunt_resistance_r_sh0: float = 1468.0
    shunt_nonlinearity_gamma: float = 0.0  # per ampere
    selector_on_resistance: float = 0.0
    wire_res_per_segment: float = 1.0  # MNA only
    driver_resistance: float = 0.0  # MNA only
    column_termination: str = VIRTUAL_GROUND
    r_min: float = 5e3  # bounds of generated weight grids
    r_max: float = 20e3

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.rows < 1 or self.cols < 1:
            raise InputError(
                f"Crossbar needs at least one row and one column, got {self.rows}x{self.cols}"
            )
        for name in (
            "selector_on_resistance",
            "wire_res_per_segment",
            "driver_resistance",
        ):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value}")
        if not np.isfinite(self.shunt_resistance_r_sh0) or self.shunt_resistance_r_sh0 <= 0:
            raise DomainError(
                f"shunt_resistance_r_sh0 must be > 0, got {self.shunt_resistance_r_sh0}"
            )
        if not np.isfinite(self.shunt_nonlinearity_gamma) or self.shunt_nonlinearity_gamma < 0:
            raise DomainError(
                f"shunt_nonlinearity_gamma must be >= 0, got {self.shunt_nonlinearity_gamma}"
            )
        if self.column_termination != VIRTUAL_GROUND:
            raise InputError(
                f"Unsupported column termination '{self.column_termination}', "
                f"only '{VIRTUAL_GROUND}' sensing is modeled"
            )
        if not 0 < self.r_min < self.r_max:
            raise DomainError(
                f"Weight bounds must satisfy 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]"
            )

    @property
    def is_linear(self) -> bool:
        return self.shunt_nonlinearity_gamma == 0.0

    def shunt_resistance(self, injected_current: float) -> float:
        """Row-side return-path resistance at a given photocurrent (A)."""
        return self.shunt_resistance_r_sh0 * (
            1.0 + self.shunt_nonlinearity_gamma * injected_current
        )

    def with_explicit_shunt(self) -> "CrossbarConfig":
        """Copy whose cell access resistance realizes the return path as a resistor."""
        return replace(self, selector_on_resistance=self.shunt_resistance_r_sh0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "read_voltage": self.read_voltage,
            "shunt_resistance_r_sh0": self.shunt_resistance_r_sh0,
            "shunt_nonlinearity_gamma": self.shunt_nonlinearity_gamma,
            "selector_on_resistance": self.selector_on_resistance,
            "wire_res_per_segment": self.wire_res_per_segment,
            "driver_resistance": self.driver_resistance,
            "column_termination": self.column_termination,
            "r_min": self.r_min,
            "r_max": self.r_max,
        }


@dataclass(frozen=True, eq=False)
class WeightGrid:
    """
    Cell resistances of a crossbar, one per (row, col), in ohms.

    The array is stored read-only; use with_cell() for modified copies.
    """

    resistances: np.ndarray

    def __post_init__(self):
        array = np.array(self.resistances, dtype=float)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise InputError(f"Weight grid must be a non-empty 2-D array, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise DomainError("Weight grid resistances must be finite")
        if np.any(array <= 0):
            row, col = (int(k) for k in np.argwhere(array <= 0)[0])
            raise DomainError(
                f"Weight grid resistances must be strictly positive, cell ({row}, {col}) is {array[row, col]}"
            )
        array.setflags(write=False)
        object.__setattr__(self, "resistances", array)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.resistances.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self.resistances.shape[0]

    @property
    def cols(self) -> int:
        return self.resistances.shape[1]

    @property
    def conductances(self) -> np.ndarray:
        return 1.0 / self.resistances

    def resistance(self, row: int, col: int) -> float:
        return float(self.resistances[row, col])

    def with_cell(self, row: int, col: int, resistance: float) -> "WeightGrid":
        """Return a copy with one cell replaced."""
        array = self.resistances.copy()
        array[row, col] = resistance
        return WeightGrid(array)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightGrid):
            return NotImplemented
        return bool(np.array_equal(self.resistances, other.resistances))

    def to_frame(self) -> pd.DataFrame:
        """Row-major long-form table with columns row, col, r_ohm."""
        rows, cols = np.indices(self.shape)
        return pd.DataFrame(
            {
                "row": rows.ravel(),
                "col": cols.ravel(),
                "r_ohm": self.resistances.ravel(),
            }
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "WeightGrid":
        """Rebuild a grid from a row, col, r_ohm table."""
        missing = {"row", "col", "r_ohm"} - set(frame.columns)
        if missing:
            raise InputError(f"Weight grid table is missing columns: {sorted(missing)}")
        rows = int(frame["row"].max()) + 1
        cols = int(frame["col"].max()) + 1
        if len(frame) != rows * cols:
            raise InputError(
                f"Weight grid table has {len(frame)} entries, expected {rows * cols} for {rows}x{cols}"
            )
        array = np.full((rows, cols), np.nan)
        array[frame["row"].to_numpy(int), frame["col"].to_numpy(int)] = frame["r_ohm"].to_numpy(float)
        if np.isnan(array).any():
            raise InputError("Weight grid table has duplicate or missing cells")
        return cls(array)


@dataclass(frozen=True)
class FaultEvent:
    """A photocurrent injected at the row-side node of one cell."""

    target: Tuple[int, int]
    injected_current: float  # amperes, positive into the node
    node: str = INJECTION_NODE_ROW_SIDE

    def __post_init__(self):
        if len(self.target) != 2:
            raise InputError(f"Fault target must be (row, col), got {self.target}")
        object.__setattr__(self, "target", (int(self.target[0]), int(self.target[1])))
        if not np.isfinite(self.injected_current) or self.injected_current < 0:
            raise InputError(
                f"Injected current must be finite and >= 0, got {self.injected_current}"
            )
        if self.node != INJECTION_NODE_ROW_SIDE:
            raise InputError(f"Unsupported injection node '{self.node}'")


@dataclass(frozen=True, eq=False)
class ColumnReadout:
    """Column output currents (A) of one read, one per column."""

    currents: np.ndarray
    label: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        array = np.array(self.currents, dtype=float).ravel()
        array.setflags(write=False)
        object.__setattr__(self, "currents", array)

    def __len__(self) -> int:
        return len(self.currents)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColumnReadout):
            return NotImplemented
        return bool(np.array_equal(self.currents, other.currents))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"col": np.arange(len(self.currents)), "i_amps": self.currents})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, label: str = "") -> "ColumnReadout":
        ordered = frame.sort_values("col")
        return cls(ordered["i_amps"].to_numpy(float), label=label)
