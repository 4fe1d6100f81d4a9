"""
Laser Data Models

Array geometry, laser spot description and raster scan plans. Positions are
in micrometres with cell (i, j) centred at (x = j * pitch, y = i * pitch).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np
import pandas as pd

from ..utils.error_handling import InputError

MIN_BEAM_DIAMETER_UM = 1.0
MAX_BEAM_DIAMETER_UM = 50.0

# (row_start, row_stop, col_start, col_stop), stop exclusive
Region = Tuple[int, int, int, int]


class BeamProfile(Enum):
    """Intensity profile of the laser spot."""

    UNIFORM_DISK = "uniform-disk"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class GeometryConfig:
    """Physical layout of the array."""

    cell_pitch: float = 1.0
    rows: int = 256
    cols: int = 128

    def __post_init__(self):
        if not (np.isfinite(self.cell_pitch) and self.cell_pitch > 0):
            raise InputError(f"Cell pitch must be > 0, got {self.cell_pitch}")
        if self.rows < 1 or self.cols < 1:
            raise InputError(f"Geometry needs at least one cell, got {self.rows}x{self.cols}")

    def cell_center(self, row: int, col: int) -> Tuple[float, float]:
        return (col * self.cell_pitch, row * self.cell_pitch)

    def full_region(self) -> Region:
        return (0, self.rows, 0, self.cols)

    def check_region(self, region: Region) -> Region:
        r0, r1, c0, c1 = (int(v) for v in region)
        if not (0 <= r0 < r1 <= self.rows and 0 <= c0 < c1 <= self.cols):
            raise InputError(
                f"Region {region} is empty or outside the {self.rows}x{self.cols} array"
            )
        return (r0, r1, c0, c1)


@dataclass(frozen=True)
class BeamSpec:
    """Laser spot: centre (um), diameter (um), total photocurrent (A), profile."""

    center: Tuple[float, float]
    diameter: float
    total_photocurrent: float
    profile: BeamProfile = BeamProfile.UNIFORM_DISK

    def __post_init__(self):
        if not MIN_BEAM_DIAMETER_UM <= self.diameter <= MAX_BEAM_DIAMETER_UM:
            raise InputError(
                f"beam diameter must be within 1–50 μm, got {self.diameter}"
            )
        if not (np.isfinite(self.total_photocurrent) and self.total_photocurrent >= 0):
            raise InputError(
                f"Total photocurrent must be finite and >= 0, got {self.total_photocurrent}"
            )
        x, y = self.center
        if not (np.isfinite(x) and np.isfinite(y)):
            raise InputError(f"Beam centre must be finite, got {self.center}")
        object.__setattr__(self, "center", (float(x), float(y)))

    @property
    def radius(self) -> float:
        return self.diameter / 2.0

    @property
    def sigma(self) -> float:
        """Gaussian width; the profile is truncated at the spot radius."""
        return self.diameter / 4.0

    def moved_to(self, center: Tuple[float, float]) -> "BeamSpec":
        return BeamSpec(center, self.diameter, self.total_photocurrent, self.profile)

    def with_current(self, total_photocurrent: float) -> "BeamSpec":
        return BeamSpec(self.center, self.diameter, total_photocurrent, self.profile)


@dataclass(frozen=True)
class ScanPlan:
    """Ordered raster of beam centres."""

    positions: List[Tuple[float, float]]
    step: float
    diameter: float
    region: Region
    flags: List[str] = field(default_factory=list)

    @property
    def overlapping(self) -> bool:
        return self.step < self.diameter

    def __len__(self) -> int:
        return len(self.positions)

    def to_frame(self) -> pd.DataFrame:
        xs = [p[0] for p in self.positions]
        ys = [p[1] for p in self.positions]
        return pd.DataFrame(
            {"step_index": np.arange(len(self.positions)), "x_um": xs, "y_um": ys}
        )
