"""
Handlers for the device subcommands: hysteresis traces and corruption.
"""

import logging
from typing import Tuple

import numpy as np
import pandas as pd

from ..attack import corrupt_cell
from ..config import ExperimentConfig, resolve_waveform_shape
from ..models.attack import CorruptionResult
from ..models.device import CurrentWaveform, TeamParams, TeamState
from ..team import (
    calibrate_k_off,
    hysteresis_sweep,
    loop_area,
    reference_team_params,
    state_for_resistance,
)
from .context import CommandContext, CommandResult

logger = logging.getLogger(__name__)


def team_device(config: ExperimentConfig) -> Tuple[TeamParams, TeamState]:
    """Calibrated TEAM parameters and the configured initial state."""
    params = reference_team_params(calibrate_k_off(config.team.target_resistance))
    return params, state_for_resistance(params, config.team.initial_resistance)


def run_corruption(config: ExperimentConfig, peak_current: float) -> CorruptionResult:
    params, state = team_device(config)
    section = config.team
    waveform = CurrentWaveform(
        shape=resolve_waveform_shape(config),
        peak_current=peak_current,
        duration=section.duration_s,
        sample_step=section.duration_s / section.steps,
    )
    return corrupt_cell(params, state, waveform)


def handle_hysteresis(ctx: CommandContext) -> CommandResult:
    """Sinusoidal current sweep and its I-V loop."""
    section = ctx.config.team
    params, state = team_device(ctx.config)
    trajectory = hysteresis_sweep(
        params,
        section.hysteresis_amplitude_a,
        section.duration_s,
        cycles=section.hysteresis_cycles,
        initial_state=state,
        sample_step=section.duration_s / section.steps,
    )
    ctx.writer.add_table("hysteresis.csv", trajectory.to_frame())

    at_zero = np.abs(trajectory.i) == 0.0
    pinch = float(np.max(np.abs(trajectory.v[at_zero]), initial=0.0))
    amplitude = section.hysteresis_amplitude_a
    below_threshold = params.i_on < -amplitude and amplitude < params.i_off
    lines = [
        f"Hysteresis sweep: amplitude {section.hysteresis_amplitude_a * 1e3:g} mA, "
        f"period {section.duration_s * 1e6:g} us, {section.hysteresis_cycles} cycle(s)",
        f"k_off = {params.k_off:.6e} m/s, k_on = {params.k_on:.6e} m/s",
        f"R {trajectory.initial_resistance:.3f} -> {trajectory.final_resistance:.3f} ohm",
        f"loop area {loop_area(trajectory):.6e} V*A",
        f"max |v| at zero current: {pinch:.3e} V",
        f"amplitude inside the dead zone: {below_threshold}",
    ]
    ctx.writer.add_report("hysteresis_report.txt", lines)
    return {
        "command": "hysteresis",
        "r_initial": trajectory.initial_resistance,
        "r_final": trajectory.final_resistance,
        "loop_area": loop_area(trajectory),
    }


def handle_corrupt(ctx: CommandContext) -> CommandResult:
    """Resistance shift of the reference drive and of an amplitude sweep."""
    section = ctx.config.team
    main = run_corruption(ctx.config, section.peak_current_a)
    ctx.writer.add_table("corrupt_trajectory.csv", main.trajectory.to_frame())

    rows = []
    for amplitude in section.amplitudes_a:
        outcome = run_corruption(ctx.config, amplitude)
        rows.append(
            {
                "amplitude_a": amplitude,
                "r_before_ohm": outcome.r_before,
                "r_after_ohm": outcome.r_after,
                "percent_change": outcome.percent_change,
                "permanent": outcome.permanent,
            }
        )
    frame = pd.DataFrame(rows)
    ctx.writer.add_table("corrupt.csv", frame)
    by_amplitude = frame.sort_values("amplitude_a")["percent_change"].to_numpy()

    lines = [
        f"Corruption with a {section.shape} drive of {section.duration_s * 1e6:g} us",
        f"peak {section.peak_current_a * 1e3:g} mA: R {main.r_before:.3f} -> {main.r_after:.3f} ohm "
        f"({main.percent_change:+.2f}%), permanent: {main.permanent}",
        "",
        frame.to_string(index=False, float_format=lambda v: f"{v:.6g}"),
        "",
        f"percent change nondecreasing in amplitude: "
        f"{bool(np.all(np.diff(by_amplitude) >= 0))}",
    ]
    ctx.writer.add_report("corrupt_report.txt", lines)
    return {
        "command": "corrupt",
        "r_before": main.r_before,
        "r_after": main.r_after,
        "percent_change": main.percent_change,
    }
