"""
Handlers for the fault-table, calibration and estimation subcommands.

table1 reproduces the fault table on the simulated crossbar, calibrate
reports the resistance calibration fitted to the published table and to
simulated profiling campaigns, and estimate runs the validation cases.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from ..attack import (
    FAULT_TABLE_CURRENTS_UA,
    FAULT_TABLE_DELTA_UA,
    FAULT_TABLE_RESISTANCES_KOHM,
    calibrate_from_campaigns,
    calibrate_from_fault_table,
    fit_injection_slope,
    place_resistances,
    estimate_cell,
    run_campaigns,
    fault_table_campaigns,
    training_cells,
)
from ..models.attack import CalibrationModel, CampaignResult
from .context import CommandContext, CommandResult, ua

logger = logging.getLogger(__name__)


def _matches_published_design(resistances_kohm: Sequence[float], currents_ua: Sequence[float]) -> bool:
    return tuple(resistances_kohm) == FAULT_TABLE_RESISTANCES_KOHM and tuple(currents_ua) == FAULT_TABLE_CURRENTS_UA


def simulate_table(ctx: CommandContext) -> List[CampaignResult]:
    """Campaigns on the training resistances, placed in distinct cells of one grid."""
    section = ctx.config.campaign
    cells = training_cells(ctx.crossbar, len(section.training_resistances_kohm))
    reference = place_resistances(
        ctx.weights, cells, [r * 1e3 for r in section.training_resistances_kohm]
    )
    return run_campaigns(
        ctx.crossbar,
        reference,
        cells,
        ua(section.currents_ua),
        backend=ctx.backend,
        max_workers=section.max_workers,
        preset=ctx.config.preset,
    )


def handle_table1(ctx: CommandContext) -> CommandResult:
    """Reproduce the fault table and compare it with the published values."""
    section = ctx.config.campaign
    campaigns = simulate_table(ctx)
    frame = pd.concat([c.to_frame() for c in campaigns], ignore_index=True)
    ctx.writer.add_table("table1.csv", frame)

    simulated = np.array([c.delta_currents * 1e6 for c in campaigns])
    grid = pd.DataFrame(
        simulated,
        index=[f"{r:g} kohm" for r in section.training_resistances_kohm],
        columns=[f"{i:g} uA" for i in section.currents_ua],
    )
    lines = [
        f"Fault table, preset {ctx.config.preset}, backend {ctx.backend}",
        f"r_sh0 = {ctx.crossbar.shunt_resistance_r_sh0:g} ohm, "
        f"gamma = {ctx.crossbar.shunt_nonlinearity_gamma:g} 1/A",
        "",
        "Column current shift (uA):",
        grid.to_string(float_format=lambda v: f"{v:.3f}"),
    ]

    result: CommandResult = {"command": "table1", "campaigns": len(campaigns)}
    if _matches_published_design(section.training_resistances_kohm, section.currents_ua):
        errors = 100.0 * np.abs(simulated - FAULT_TABLE_DELTA_UA) / FAULT_TABLE_DELTA_UA
        lines += [
            "",
            "Relative error against the published table (%):",
            pd.DataFrame(errors, index=grid.index, columns=grid.columns).to_string(
                float_format=lambda v: f"{v:.2f}"
            ),
            "",
            f"max error {errors.max():.2f}%, mean error {errors.mean():.2f}%",
        ]
        result.update(max_error_pct=float(errors.max()), mean_error_pct=float(errors.mean()))
    ctx.writer.add_report("table1_report.txt", lines)
    return result


def _calibration_lines(title: str, campaigns: Sequence[CampaignResult], model: CalibrationModel) -> List[str]:
    rows = []
    for campaign in campaigns:
        fit = fit_injection_slope(campaign)
        rows.append(
            {
                "r_kohm": (campaign.true_resistance or float("nan")) / 1e3,
                "slope": fit.slope,
                "reciprocal_slope": fit.reciprocal_slope,
                "intercept_ua": fit.intercept * 1e6,
                "r_squared": fit.r_squared,
            }
        )
    table = pd.DataFrame(rows).to_string(index=False, float_format=lambda v: f"{v:.6g}")
    return [
        title,
        f"R_est = {model.a:.4f} x |slope| {'-' if model.b < 0 else '+'} {abs(model.b):.4f}  (kohm)",
        f"a = {model.a:.6f} kohm",
        f"b = {model.b:.6f} kohm",
        f"calibration R^2 = {model.r_squared:.8f}",
        "",
        table,
    ]


def handle_calibrate(ctx: CommandContext) -> CommandResult:
    """Fit the slope-to-resistance calibration on published and simulated data."""
    published = fault_table_campaigns()
    published_model = calibrate_from_fault_table()

    simulated = simulate_table(ctx)
    simulated_model = calibrate_from_campaigns(simulated)

    lines = _calibration_lines("Calibration from the published fault table", published, published_model)
    lines += [""]
    lines += _calibration_lines(
        f"Calibration from simulated campaigns (preset {ctx.config.preset}, backend {ctx.backend})",
        simulated,
        simulated_model,
    )
    ctx.writer.add_report("calibration_report.txt", lines)
    return {
        "command": "calibrate",
        "a": published_model.a,
        "b": published_model.b,
        "simulated_a": simulated_model.a,
        "simulated_b": simulated_model.b,
    }


def validation_cases(ctx: CommandContext) -> Dict[str, tuple]:
    section = ctx.config.campaign
    return {
        "two-point": (section.validation_resistance_kohm, section.two_point_currents_ua),
        "multi-point": (section.validation_resistance_kohm, section.multi_point_currents_ua),
        "in-range": (section.range_resistance_kohm, section.in_range_currents_ua),
        "out-of-range": (section.range_resistance_kohm, section.out_of_range_currents_ua),
    }


def handle_estimate(ctx: CommandContext) -> CommandResult:
    """Estimate cells of known resistance with the published calibration."""
    model = calibrate_from_fault_table()
    rows = []
    for case, (r_kohm, currents) in validation_cases(ctx).items():
        estimate = estimate_cell(ctx.crossbar, r_kohm * 1e3, ua(currents), model, backend=ctx.backend)
        rows.append(
            {
                "case": case,
                "currents_ua": ";".join(f"{c:g}" for c in currents),
                "r_true_kohm": r_kohm,
                "r_est_kohm": estimate.r_est_kohm,
                "err_pct": estimate.error_pct,
                "accuracy_pct": estimate.accuracy_pct,
            }
        )
    frame = pd.DataFrame(rows)
    ctx.writer.add_table("estimates.csv", frame)

    errors = dict(zip(frame["case"], frame["err_pct"]))
    ratio = errors["out-of-range"] / errors["in-range"] if errors["in-range"] > 0 else float("inf")
    lines = [
        f"Resistance estimates, preset {ctx.config.preset}, backend {ctx.backend}",
        f"calibration: R_est = {model.a:.4f} x |slope| + ({model.b:.4f}) kohm",
        "",
        frame.to_string(index=False, float_format=lambda v: f"{v:.4f}"),
        "",
        f"multi-point error below two-point error: {errors['multi-point'] < errors['two-point']}",
        f"out-of-range / in-range error ratio: {ratio:.2f}",
    ]
    ctx.writer.add_report("estimate_report.txt", lines)
    return {"command": "estimate", "errors_pct": errors}
