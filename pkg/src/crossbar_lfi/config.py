"""
Experiment configuration.

Configs are YAML documents validated by pydantic models. Every section
rejects unknown keys, and validation failures surface as a ConfigError whose
messages are prefixed with the dotted path of the offending field. Currents
are written in microamperes and resistances in ohms or kilohms as the field
names say.

Example:

    preset: paper-weak-nonlinear
    seed: 7
    array:
      rows: 16
      cols: 16
    beam:
      diameter: 3.0
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .models.beam import (
    MAX_BEAM_DIAMETER_UM,
    MIN_BEAM_DIAMETER_UM,
    BeamProfile,
    BeamSpec,
    GeometryConfig,
    Region,
)
from .models.crossbar import CrossbarConfig
from .models.device import WaveformShape
from .utils.error_handling import ConfigError

logger = logging.getLogger(__name__)

PresetName = Literal["paper-linear", "paper-weak-nonlinear", "paper-TEAM", "custom"]
BackendName = Literal["ideal", "mna"]

# Return-path parameters per preset: (r_sh0 in ohm, gamma per ampere)
PRESET_SHUNTS: Dict[str, Tuple[float, float]] = {
    "paper-linear": (1468.0, 0.0),
    "paper-weak-nonlinear": (1470.0, 400.0),
    "paper-TEAM": (1468.0, 0.0),
    "custom": (1468.0, 0.0),
}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ArraySection(_Section):
    rows: int = Field(256, ge=1)
    cols: int = Field(128, ge=1)
    read_voltage: float = 0.2
    shunt_resistance_r_sh0: Optional[float] = Field(None, gt=0)
    shunt_nonlinearity_gamma: Optional[float] = Field(None, ge=0)
    selector_on_resistance: float = Field(0.0, ge=0)
    wire_res_per_segment: float = Field(1.0, ge=0)
    driver_resistance: float = Field(0.0, ge=0)
    r_min: float = Field(5e3, gt=0)
    r_max: float = Field(20e3, gt=0)

    @model_validator(mode="after")
    def _bounds_ordered(self) -> "ArraySection":
        if self.r_min >= self.r_max:
            raise ValueError("r_min must be below r_max")
        return self


class GeometrySection(_Section):
    cell_pitch: float = Field(1.0, gt=0)


class BeamSection(_Section):
    diameter: float = 3.0
    profile: Literal["uniform-disk", "gaussian"] = "uniform-disk"
    photocurrents_ua: List[float] = Field(default_factory=lambda: [20.0, 40.0], min_length=1)

    @field_validator("diameter")
    @classmethod
    def _diameter_in_range(cls, value: float) -> float:
        if not MIN_BEAM_DIAMETER_UM <= value <= MAX_BEAM_DIAMETER_UM:
            raise ValueError("beam diameter must be within 1–50 μm")
        return value

    @field_validator("photocurrents_ua")
    @classmethod
    def _nonnegative(cls, values: List[float]) -> List[float]:
        if any(v < 0 for v in values):
            raise ValueError("photocurrents must be >= 0")
        return values


class ScanSection(_Section):
    step: float = Field(1.0, gt=0)
    region: List[int] = Field(default_factory=lambda: [0, 16, 0, 16], min_length=4, max_length=4)

    @field_validator("region")
    @classmethod
    def _ordered(cls, values: List[int]) -> List[int]:
        r0, r1, c0, c1 = values
        if not (0 <= r0 < r1 and 0 <= c0 < c1):
            raise ValueError("region must be [row_start, row_stop, col_start, col_stop] with start < stop")
        return values


def _currents(values: List[float]) -> List[float]:
    if any(v < 0 for v in values):
        raise ValueError("injected currents must be >= 0")
    if len(set(values)) != len(values):
        raise ValueError("injected currents must be distinct")
    return values


class CampaignSection(_Section):
    training_resistances_kohm: List[float] = Field(
        default_factory=lambda: [5.0, 10.0, 12.0, 15.0, 20.0], min_length=2
    )
    currents_ua: List[float] = Field(
        default_factory=lambda: [10.0, 15.0, 20.0, 30.0, 40.0], min_length=2
    )
    validation_resistance_kohm: float = Field(17.0, gt=0)
    two_point_currents_ua: List[float] = Field(default_factory=lambda: [15.0, 20.0], min_length=2)
    multi_point_currents_ua: List[float] = Field(
        default_factory=lambda: [15.0, 20.0, 30.0, 40.0], min_length=2
    )
    range_resistance_kohm: float = Field(10.0, gt=0)
    in_range_currents_ua: List[float] = Field(
        default_factory=lambda: [12.0, 15.0, 20.0, 30.0, 40.0], min_length=2
    )
    out_of_range_currents_ua: List[float] = Field(
        default_factory=lambda: [50.0, 75.0, 100.0], min_length=2
    )
    max_workers: Optional[int] = Field(None, ge=1)

    @field_validator(
        "currents_ua",
        "two_point_currents_ua",
        "multi_point_currents_ua",
        "in_range_currents_ua",
        "out_of_range_currents_ua",
    )
    @classmethod
    def _distinct_currents(cls, values: List[float]) -> List[float]:
        return _currents(values)


class TeamSection(_Section):
    peak_current_a: float = Field(1.2e-3, gt=0)
    duration_s: float = Field(100e-6, gt=0)
    steps: int = Field(10_000, ge=100)
    shape: Literal["sinusoid", "triangle", "pulse"] = "sinusoid"
    initial_resistance: float = Field(138.0, gt=0)
    target_resistance: float = Field(336.0, gt=0)
    amplitudes_a: List[float] = Field(
        default_factory=lambda: [10e-6, 100e-6, 600e-6, 1.2e-3], min_length=1
    )
    hysteresis_amplitude_a: float = Field(1.2e-3, gt=0)
    hysteresis_cycles: int = Field(1, ge=1)
    corrupt_fraction: float = Field(0.05, gt=0, le=1)
    input_count: int = Field(32, ge=1)


class ExperimentConfig(_Section):
    """Validated experiment configuration with defaults applied."""

    preset: PresetName = "paper-linear"
    seed: int = Field(0, ge=0)
    output_dir: str = "results"
    backend: BackendName = "ideal"
    array: ArraySection = Field(default_factory=ArraySection)
    geometry: GeometrySection = Field(default_factory=GeometrySection)
    beam: BeamSection = Field(default_factory=BeamSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    campaign: CampaignSection = Field(default_factory=CampaignSection)
    team: TeamSection = Field(default_factory=TeamSection)

    @model_validator(mode="after")
    def _region_inside_array(self) -> "ExperimentConfig":
        r0, r1, c0, c1 = self.scan.region
        if r1 > self.array.rows or c1 > self.array.cols:
            raise ValueError(
                f"scan.region {self.scan.region} exceeds the {self.array.rows}x{self.array.cols} array"
            )
        if len(self.campaign.training_resistances_kohm) > self.array.rows * self.array.cols:
            raise ValueError("campaign.training_resistances_kohm has more entries than array cells")
        return self


def _messages(error: ValidationError) -> List[str]:
    messages = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        messages.append(f"{path}: {item['msg']}")
    return messages


def validate_mapping(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a plain mapping into an ExperimentConfig."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_messages(e)) from e


def parse_config(text: str) -> ExperimentConfig:
    """
    Parse YAML text into a validated config.

    Empty text yields all defaults.

    Raises:
        ConfigError: On malformed YAML, unknown keys or out-of-range values
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError([f"<root>: malformed YAML ({e})"]) from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(["<root>: config must be a mapping of sections"])
    return validate_mapping(data)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    logger.debug(f"Loading config from {path}")
    return parse_config(Path(path).read_text(encoding="utf-8"))


def serialize_config(config: ExperimentConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)


def apply_overrides(config: ExperimentConfig, **overrides: Any) -> ExperimentConfig:
    """Re-validate config with top-level overrides; None values are skipped."""
    data = config.model_dump(mode="json")
    data.update({key: value for key, value in overrides.items() if value is not None})
    return validate_mapping(data)


def resolve_crossbar_config(config: ExperimentConfig) -> CrossbarConfig:
    """Crossbar configuration with unset shunt fields taken from the preset."""
    r_sh0, gamma = PRESET_SHUNTS[config.preset]
    section = config.array
    return CrossbarConfig(
        rows=section.rows,
        cols=section.cols,
        read_voltage=section.read_voltage,
        shunt_resistance_r_sh0=(
            section.shunt_resistance_r_sh0 if section.shunt_resistance_r_sh0 is not None else r_sh0
        ),
        shunt_nonlinearity_gamma=(
            section.shunt_nonlinearity_gamma
            if section.shunt_nonlinearity_gamma is not None
            else gamma
        ),
        selector_on_resistance=section.selector_on_resistance,
        wire_res_per_segment=section.wire_res_per_segment,
        driver_resistance=section.driver_resistance,
        r_min=section.r_min,
        r_max=section.r_max,
    )


def resolve_geometry(config: ExperimentConfig) -> GeometryConfig:
    return GeometryConfig(
        cell_pitch=config.geometry.cell_pitch, rows=config.array.rows, cols=config.array.cols
    )


def resolve_beam(config: ExperimentConfig, center: Tuple[float, float] = (0.0, 0.0)) -> BeamSpec:
    return BeamSpec(
        center=center,
        diameter=config.beam.diameter,
        total_photocurrent=config.beam.photocurrents_ua[0] * 1e-6,
        profile=BeamProfile(config.beam.profile),
    )


def resolve_region(config: ExperimentConfig) -> Region:
    r0, r1, c0, c1 = config.scan.region
    return (r0, r1, c0, c1)


def resolve_waveform_shape(config: ExperimentConfig) -> WaveformShape:
    return WaveformShape(config.team.shape)
