"""
Data Models

Domain types for the crossbar, the TEAM device, the laser and the attack
pipeline.
"""

from typing import List

from .attack import (
    CalibrationModel,
    CampaignResult,
    CampaignSample,
    CorruptionResult,
    ExtractionResult,
    ImpactReport,
    RegressionFit,
    ResistanceEstimate,
    ScanMeasurement,
)
from .beam import BeamProfile, BeamSpec, GeometryConfig, ScanPlan
from .crossbar import ColumnReadout, CrossbarConfig, FaultEvent, WeightGrid
from .device import (
    CurrentWaveform,
    ResistanceMap,
    TeamParams,
    TeamState,
    TeamTrajectory,
    WaveformShape,
    WindowParams,
)

__all__: List[str] = [
    "BeamProfile",
    "BeamSpec",
    "CalibrationModel",
    "CampaignResult",
    "CampaignSample",
    "ColumnReadout",
    "CorruptionResult",
    "CrossbarConfig",
    "CurrentWaveform",
    "ExtractionResult",
    "FaultEvent",
    "GeometryConfig",
    "ImpactReport",
    "RegressionFit",
    "ResistanceEstimate",
    "ResistanceMap",
    "ScanMeasurement",
    "ScanPlan",
    "TeamParams",
    "TeamState",
    "TeamTrajectory",
    "WaveformShape",
    "WeightGrid",
    "WindowParams",
]
