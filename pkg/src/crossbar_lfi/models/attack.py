"""
Attack Data Models

Records produced by the fault-analysis pipeline: campaigns, regressions,
calibrations, resistance estimates, scan measurements, extraction results and
corruption outcomes. Currents are stored in amperes and resistances in ohms
unless a field name says otherwise (kohm fields follow the calibration units).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..utils.error_handling import DegenerateDesignError, InputError
from .device import TeamTrajectory

Cell = Tuple[int, int]


@dataclass(frozen=True)
class CampaignSample:
    """One injected current and the column current shift it caused."""

    target: Cell
    injected_current: float
    delta_current: float
    column: int


@dataclass
class CampaignResult:
    """Fault campaign on a single target cell."""

    target: Cell
    samples: List[CampaignSample]
    preset: str = "custom"
    true_resistance: Optional[float] = None  # ohms, when known (simulation)

    def __post_init__(self):
        """Validate campaign data after initialization."""
        currents = [s.injected_current for s in self.samples]
        if len(set(currents)) != len(currents):
            raise InputError(f"Campaign on {self.target} repeats an injected current")
        if not all(np.isfinite(s.delta_current) for s in self.samples):
            raise InputError(f"Campaign on {self.target} has a non-finite current shift")

    @property
    def injected_currents(self) -> np.ndarray:
        return np.array([s.injected_current for s in self.samples], dtype=float)

    @property
    def delta_currents(self) -> np.ndarray:
        return np.array([s.delta_current for s in self.samples], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        """Campaign table: r_ohm, i_inj_ua, delta_i_ua, col."""
        r = self.true_resistance if self.true_resistance is not None else np.nan
        return pd.DataFrame(
            {
                "r_ohm": [r] * len(self.samples),
                "i_inj_ua": [s.injected_current * 1e6 for s in self.samples],
                "delta_i_ua": [s.delta_current * 1e6 for s in self.samples],
                "col": [s.column for s in self.samples],
            }
        )


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit of current shift on injected current (with intercept)."""

    slope: float
    intercept: float  # A
    r_squared: float
    points: int = 0

    @property
    def reciprocal_slope(self) -> float:
        if self.slope == 0 or not np.isfinite(self.slope):
            raise DegenerateDesignError(f"No reciprocal for a slope of {self.slope}")
        return 1.0 / self.slope


@dataclass(frozen=True)
class CalibrationModel:
    """R_est = a * reciprocal_slope + b, with a and b in kohm."""

    a: float
    b: float
    training_resistances: Tuple[float, ...] = ()  # kohm
    r_squared: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise InputError(f"Calibration gain a must be > 0, got {self.a}")

    def predict_kohm(self, reciprocal_slope: float) -> float:
        return self.a * reciprocal_slope + self.b

    def ratio_to_kohm(self, ratio: float) -> float:
        """Resistance for a divider ratio (the forward slope)."""
        return self.a / ratio + self.b


@dataclass(frozen=True)
class ResistanceEstimate:
    """Estimated cell resistance with optional comparison against truth."""

    r_est_kohm: float
    r_true_kohm: Optional[float] = None
    fit: Optional[RegressionFit] = None

    @property
    def error_pct(self) -> Optional[float]:
        if self.r_true_kohm is None:
            return None
        return 100.0 * abs(self.r_est_kohm - self.r_true_kohm) / self.r_true_kohm

    @property
    def accuracy_pct(self) -> Optional[float]:
        error = self.error_pct
        return None if error is None else 100.0 - error


@dataclass(frozen=True, eq=False)
class ScanMeasurement:
    """
    One beam position at one photocurrent.

    footprint lists ((row, col), injected current) for every illuminated
    cell; delta_currents holds the column current shifts, one per column.
    """

    step_index: int
    position: Tuple[float, float]
    total_photocurrent: float
    footprint: List[Tuple[Cell, float]]
    delta_currents: np.ndarray


@dataclass
class ExtractionResult:
    """Recovered resistances of a scanned region."""

    estimates_ohm: Dict[Cell, float]
    ratios: Dict[Cell, float]
    residuals: Dict[int, float]  # column -> least-squares residual norm (A)
    clamped_cells: List[Cell] = field(default_factory=list)
    truth_ohm: Optional[Dict[Cell, float]] = None

    @property
    def cells(self) -> List[Cell]:
        return sorted(self.estimates_ohm)

    def errors_pct(self) -> Dict[Cell, float]:
        if self.truth_ohm is None:
            return {}
        return {
            cell: 100.0 * abs(est - self.truth_ohm[cell]) / self.truth_ohm[cell]
            for cell, est in self.estimates_ohm.items()
        }

    def rms_relative_error(self) -> Optional[float]:
        """RMS of relative errors (fraction, not percent) against truth."""
        errors = self.errors_pct()
        if not errors:
            return None
        values = np.array([errors[c] for c in sorted(errors)]) / 100.0
        return float(np.sqrt(np.mean(values**2)))

    def to_frame(self) -> pd.DataFrame:
        """Extraction table: row, col, r_true_ohm, r_est_ohm, err_pct."""
        cells = self.cells
        errors = self.errors_pct()
        return pd.DataFrame(
            {
                "row": [c[0] for c in cells],
                "col": [c[1] for c in cells],
                "r_true_ohm": [
                    self.truth_ohm[c] if self.truth_ohm is not None else np.nan
                    for c in cells
                ],
                "r_est_ohm": [self.estimates_ohm[c] for c in cells],
                "err_pct": [errors.get(c, np.nan) for c in cells],
            }
        )


@dataclass(frozen=True, eq=False)
class CorruptionResult:
    """Outcome of driving one device with a fault waveform."""

    r_before: float
    r_after: float
    permanent: bool
    trajectory: TeamTrajectory

    @property
    def percent_change(self) -> float:
        return 100.0 * (self.r_after - self.r_before) / self.r_before

    @property
    def resistance_ratio(self) -> float:
        return self.r_after / self.r_before


@dataclass
class ImpactReport:
    """Per-column relative deviation of inference outputs."""

    column_deviation: np.ndarray  # max over inputs
    column_mean_deviation: np.ndarray  # mean over inputs
    input_count: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.column_deviation)) if self.column_deviation.size else 0.0

    @property
    def mean_deviation(self) -> float:
        return float(np.mean(self.column_mean_deviation)) if self.column_mean_deviation.size else 0.0

    @property
    def affected_columns(self) -> List[int]:
        return [int(c) for c in np.flatnonzero(self.column_deviation > 0)]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "col": np.arange(len(self.column_deviation)),
                "max_rel_deviation": self.column_deviation,
                "mean_rel_deviation": self.column_mean_deviation,
            }
        )
