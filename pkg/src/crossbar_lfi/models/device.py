"""
Device Data Models

Parameter, state, drive and trajectory types for the current-controlled
TEAM memristor model.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..utils.error_handling import DomainError, InputError


class WaveformShape(Enum):
    """Supported fault-drive shapes."""

    SINUSOID = "sinusoid"
    TRIANGLE = "triangle"
    PULSE = "pulse"


class ResistanceMap(Enum):
    """State-to-resistance maps. Only the linear map is modeled."""

    LINEAR = "linear"


@dataclass(frozen=True)
class WindowParams:
    """Exponential window parameters (m)."""

    a_on: float
    a_off: float
    w_c: float

    def __post_init__(self):
        if not self.w_c > 0:
            raise InputError(f"Window width w_c must be > 0, got {self.w_c}")


@dataclass(frozen=True)
class TeamParams:
    """
    Current-controlled TEAM parameters.

    k_on < 0 < k_off are state velocities (m/s), i_on < 0 < i_off are the
    threshold currents (A), [x_on, x_off] bounds the state (m) and maps
    linearly onto [r_on, r_off] (ohm).
    """

    k_on: float
    k_off: float
    alpha_on: float
    alpha_off: float
    i_on: float
    i_off: float
    x_on: float
    x_off: float
    r_on: float
    r_off: float
    window: WindowParams
    resistance_map: ResistanceMap = ResistanceMap.LINEAR

    def __post_init__(self):
        """Validate TEAM parameters after initialization."""
        errors = []
        if not self.k_on < 0:
            errors.append(f"k_on must be < 0, got {self.k_on}")
        if not self.k_off > 0:
            errors.append(f"k_off must be > 0, got {self.k_off}")
        if not self.i_on < 0 < self.i_off:
            errors.append(f"thresholds must satisfy i_on < 0 < i_off, got ({self.i_on}, {self.i_off})")
        if not self.x_on < self.x_off:
            errors.append(f"state bounds must satisfy x_on < x_off, got ({self.x_on}, {self.x_off})")
        if not 0 < self.r_on < self.r_off:
            errors.append(f"resistances must satisfy 0 < r_on < r_off, got ({self.r_on}, {self.r_off})")
        if self.alpha_on < 1 or self.alpha_off < 1:
            errors.append(
                f"exponents must be >= 1, got alpha_on={self.alpha_on}, alpha_off={self.alpha_off}"
            )
        if errors:
            raise InputError("; ".join(errors))

    @property
    def state_span(self) -> float:
        return self.x_off - self.x_on

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k_on": self.k_on,
            "k_off": self.k_off,
            "alpha_on": self.alpha_on,
            "alpha_off": self.alpha_off,
            "i_on": self.i_on,
            "i_off": self.i_off,
            "x_on": self.x_on,
            "x_off": self.x_off,
            "r_on": self.r_on,
            "r_off": self.r_off,
            "a_on": self.window.a_on,
            "a_off": self.window.a_off,
            "w_c": self.window.w_c,
            "resistance_map": self.resistance_map.value,
        }


@dataclass(frozen=True)
class TeamState:
    """Internal state x (m)."""

    x: float

    def check_bounds(self, params: TeamParams) -> None:
        if not params.x_on <= self.x <= params.x_off:
            raise DomainError(
                f"State x={self.x} is outside [{params.x_on}, {params.x_off}]"
            )


@dataclass(frozen=True)
class CurrentWaveform:
    """
    Fault-drive current i(t).

    Sampling uses n = round(duration / sample_step) intervals; sinusoid and
    triangle shapes run `cycles` full periods, a pulse holds peak_current for
    the whole duration.
    """

    shape: WaveformShape
    peak_current: float
    duration: float
    sample_step: float
    cycles: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.duration) and self.duration > 0):
            raise InputError(f"Waveform duration must be > 0, got {self.duration}")
        if not (np.isfinite(self.sample_step) and self.sample_step > 0):
            raise InputError(f"Waveform sample step must be > 0, got {self.sample_step}")
        if self.sample_step > self.duration / 100 * (1 + 1e-12):
            raise InputError(
                f"Waveform sample step {self.sample_step} exceeds duration/100 ({self.duration / 100})"
            )
        if not np.isfinite(self.peak_current):
            raise InputError("Waveform peak current must be finite")
        if self.cycles < 1:
            raise InputError(f"Waveform needs at least one cycle, got {self.cycles}")

    @property
    def intervals(self) -> int:
        return int(round(self.duration / self.sample_step))

    def times(self) -> np.ndarray:
        n = self.intervals
        return self.duration * np.arange(n + 1) / n

    def currents(self) -> np.ndarray:
        """Samples of i(t) at times(); zero crossings land on exact indices."""
        n = self.intervals
        k = np.arange(n + 1)
        if self.shape is WaveformShape.PULSE:
            return np.full(n + 1, float(self.peak_current))

        phase = (self.cycles * k) % n / n
        if self.shape is WaveformShape.SINUSOID:
            values = self.peak_current * np.sin(2.0 * np.pi * phase)
            # sin(pi) is ~1e-16 in floating point; pin the half-period samples.
            values[(self.cycles * k * 2) % n == 0] = 0.0
            return values

        # Triangle: 0 -> +peak -> 0 -> -peak -> 0 per cycle.
        tri = np.where(
            phase < 0.25,
            4.0 * phase,
            np.where(phase < 0.75, 2.0 - 4.0 * phase, 4.0 * phase - 4.0),
        )
        return self.peak_current * tri


@dataclass(frozen=True, eq=False)
class TeamTrajectory:
    """Sampled trajectory of one integration."""

    t: np.ndarray
    i: np.ndarray
    v: np.ndarray
    x: np.ndarray
    r: np.ndarray
    final_state: TeamState
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def initial_resistance(self) -> float:
        return float(self.r[0])

    @property
    def final_resistance(self) -> float:
        return float(self.r[-1])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t_s": self.t,
                "i_a": self.i,
                "v_v": self.v,
                "x_m": self.x,
                "r_ohm": self.r,
            }
        )
