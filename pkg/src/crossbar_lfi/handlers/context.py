"""
Shared state handed to every subcommand handler.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Sequence

from ..config import ExperimentConfig, resolve_crossbar_config
from ..crossbar import grid_for_config
from ..models.crossbar import CrossbarConfig, WeightGrid
from ..utils.artifacts import ArtifactWriter

CommandResult = Dict[str, Any]


@dataclass
class CommandContext:
    """Validated config, resolved crossbar and the artifact sink of one run."""

    config: ExperimentConfig
    writer: ArtifactWriter

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "CommandContext":
        return cls(config=config, writer=ArtifactWriter(config.output_dir))

    @cached_property
    def crossbar(self) -> CrossbarConfig:
        return resolve_crossbar_config(self.config)

    @cached_property
    def weights(self) -> WeightGrid:
        """Seeded random grid within the configured resistance bounds."""
        return grid_for_config(self.crossbar, self.config.seed)

    @property
    def backend(self) -> str:
        return self.config.backend


def ua(values: Sequence[float]) -> List[float]:
    """Microamperes to amperes."""
    return [v * 1e-6 for v in values]
