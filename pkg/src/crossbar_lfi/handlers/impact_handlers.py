"""
Handler for the inference-impact subcommand.
"""

import logging

from ..attack import corrupt_weights, inference_impact, random_inputs, select_cells
from .context import CommandContext, CommandResult
from .team_handlers import run_corruption

logger = logging.getLogger(__name__)


def handle_impact(ctx: CommandContext) -> CommandResult:
    """Corrupt a fraction of cells and measure the column output deviation."""
    section = ctx.config.team
    corruption = run_corruption(ctx.config, section.peak_current_a)
    cells = select_cells(ctx.weights, section.corrupt_fraction, ctx.config.seed)
    corrupted = corrupt_weights(ctx.weights, cells, corruption)
    inputs = random_inputs(ctx.crossbar, section.input_count, ctx.config.seed + 1)
    report = inference_impact(ctx.crossbar, ctx.weights, corrupted, inputs)

    ctx.writer.add_table("impact.csv", report.to_frame())
    touched = sorted({col for _, col in cells})
    lines = [
        f"Inference impact: {len(cells)} corrupted cell(s) in {len(touched)} column(s), "
        f"resistance ratio {corruption.resistance_ratio:.4f}",
        f"{report.input_count} random input(s)",
        f"max relative column deviation {report.max_deviation:.6f}",
        f"mean relative column deviation {report.mean_deviation:.6f}",
        f"columns with nonzero deviation: {len(report.affected_columns)}",
        f"deviation confined to corrupted columns: {set(report.affected_columns) <= set(touched)}",
    ]
    ctx.writer.add_report("impact_report.txt", lines)
    return {
        "command": "impact",
        "corrupted_cells": len(cells),
        "max_deviation": report.max_deviation,
        "mean_deviation": report.mean_deviation,
    }
