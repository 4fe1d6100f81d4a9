"""
Differential fault analysis of a crossbar.

Passive attack: inject photocurrents into a cell, regress the column current
shift on the injected current, and map the reciprocal slope to a resistance
through a calibration trained on cells of known resistance. Overlapping
scans are unmixed per column by least squares on the divider ratios.

Active attack: drive a device with a fault waveform through the TEAM model
and push the resulting resistance shift back into a weight grid.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.stats import linregress

from .crossbar import (
    check_grid,
    delta_current,
    faulted_column_currents,
    ideal_column_currents,
    read_scheme_voltages,
)
from .laser import beam_footprint
from .mna import CrossbarNetwork
from .models.attack import (
    CalibrationModel,
    CampaignResult,
    CampaignSample,
    Cell,
    CorruptionResult,
    ExtractionResult,
    ImpactReport,
    RegressionFit,
    ResistanceEstimate,
    ScanMeasurement,
)
from .models.beam import BeamSpec, GeometryConfig, ScanPlan
from .models.crossbar import CrossbarConfig, FaultEvent, WeightGrid
from .models.device import CurrentWaveform, TeamParams, TeamState
from .team import integrate_waveform, team_state_derivative
from .utils.error_handling import (
    DegenerateDesignError,
    IdentifiabilityError,
    InputError,
)
from .utils.validation import ArrayValidator, raise_if_invalid

logger = logging.getLogger(__name__)

BACKEND_IDEAL = "ideal"
BACKEND_MNA = "mna"
BACKENDS = (BACKEND_IDEAL, BACKEND_MNA)

RATIO_FLOOR = 1e-12
NULL_SPACE_TOLERANCE = 1e-8

# Published fault table: rows are cell resistances, columns injected currents.
FAULT_TABLE_RESISTANCES_KOHM: Tuple[float, ...] = (5.0, 10.0, 12.0, 15.0, 20.0)
FAULT_TABLE_CURRENTS_UA: Tuple[float, ...] = (10.0, 15.0, 20.0, 30.0, 40.0)
FAULT_TABLE_DELTA_UA = np.array(
    [
        [2.29, 3.43, 4.59, 6.91, 9.25],
        [1.28, 1.93, 2.58, 3.88, 5.21],
        [1.09, 1.64, 2.19, 3.31, 4.43],
        [0.89, 1.34, 1.79, 2.70, 3.62],
        [0.68, 1.03, 1.37, 2.07, 2.78],
    ]
)
FAULT_TABLE_DELTA_UA.setflags(write=False)


def fault_table_campaigns() -> List[CampaignResult]:
    """The published fault table as one campaign per resistance."""
    campaigns = []
    for k, r_kohm in enumerate(FAULT_TABLE_RESISTANCES_KOHM):
        samples = [
            CampaignSample(
                target=(k, 0),
                injected_current=i_ua * 1e-6,
                delta_current=float(FAULT_TABLE_DELTA_UA[k, n]) * 1e-6,
                column=0,
            )
            for n, i_ua in enumerate(FAULT_TABLE_CURRENTS_UA)
        ]
        campaigns.append(
            CampaignResult(
                target=(k, 0), samples=samples, preset="table-i", true_resistance=r_kohm * 1e3
            )
        )
    return campaigns


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise InputError(f"Unknown backend '{backend}', expected one of {BACKENDS}")


def build_network(config: CrossbarConfig, weights: WeightGrid) -> CrossbarNetwork:
    """Nodal network with the row-side return path as an explicit access resistor."""
    return CrossbarNetwork(config.with_explicit_shunt(), weights)


def run_campaign(
    config: CrossbarConfig,
    weights: WeightGrid,
    target: Cell,
    injection_currents: Sequence[float],
    backend: str = BACKEND_IDEAL,
    row_voltages: Optional[Sequence[float]] = None,
    network: Optional[CrossbarNetwork] = None,
    preset: str = "custom",
) -> CampaignResult:
    """
    Inject each current into the target cell and record the shift of its column.

    Args:
        config: Crossbar configuration
        weights: Stored resistances
        target: (row, col) of the targeted cell
        injection_currents: Photocurrents in amperes, distinct
        backend: "ideal" (divider model) or "mna" (nodal analysis)
        row_voltages: Row inputs, defaults to the single-row read scheme
        network: Prebuilt nodal network to reuse with the mna backend
        preset: Label recorded on the result

    Returns:
        CampaignResult with one sample per current
    """
    _check_backend(backend)
    check_grid(config, weights)
    validator = ArrayValidator()
    result = validator.validate_target("target", target, config.rows, config.cols)
    if len(injection_currents) == 0:
        result.add_error("campaign needs at least one injected current")
    for current in injection_currents:
        result.merge(validator.validate_nonnegative("injected current", current))
    raise_if_invalid(result, InputError)

    voltages = read_scheme_voltages(config) if row_voltages is None else row_voltages
    row, col = int(target[0]), int(target[1])
    samples = []
    if backend == BACKEND_MNA:
        network = network or build_network(config, weights)
        baseline = network.column_currents(voltages)
        for current in injection_currents:
            faulted = network.column_currents(voltages, [FaultEvent((row, col), current)])
            delta = delta_current(baseline, faulted)[col]
            samples.append(CampaignSample((row, col), float(current), float(delta), col))
    else:
        baseline = ideal_column_currents(config, weights, voltages)
        for current in injection_currents:
            faulted = faulted_column_currents(
                config, weights, voltages, [FaultEvent((row, col), current)]
            )
            delta = delta_current(baseline, faulted)[col]
            samples.append(CampaignSample((row, col), float(current), float(delta), col))

    logger.debug(f"Campaign on {target}: {len(samples)} injection(s) via {backend}")
    return CampaignResult(
        target=(row, col),
        samples=samples,
        preset=preset,
        true_resistance=weights.resistance(row, col),
    )


def run_campaigns(
    config: CrossbarConfig,
    weights: WeightGrid,
    targets: Sequence[Cell],
    injection_currents: Sequence[float],
    backend: str = BACKEND_IDEAL,
    max_workers: Optional[int] = None,
    preset: str = "custom",
) -> List[CampaignResult]:
    """Campaigns over several targets, returned in target order."""
    _check_backend(backend)
    network = build_network(config, weights) if backend == BACKEND_MNA else None

    def one(target: Cell) -> CampaignResult:
        return run_campaign(
            config,
            weights,
            target,
            injection_currents,
            backend=backend,
            network=network,
            preset=preset,
        )

    if max_workers is not None and max_workers > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, targets))
    else:
        results = [one(target) for target in targets]
    logger.info(f"Ran {len(results)} campaign(s) via the {backend} backend")
    return results


def fit_line(currents: Sequence[float], deltas: Sequence[float]) -> RegressionFit:
    """OLS with intercept of deltas on currents."""
    x = np.asarray(currents, dtype=float)
    y = np.asarray(deltas, dtype=float)
    if len(x) != len(y):
        raise InputError(f"Regression inputs differ in length ({len(x)} vs {len(y)})")
    if len(x) < 2 or np.ptp(x) == 0:
        raise DegenerateDesignError(
            "Regression needs at least two distinct injected currents"
        )
    fit = linregress(x, y)
    if fit.slope == 0 or not np.isfinite(fit.slope):
        raise DegenerateDesignError(
            f"Regression slope is {fit.slope}: the shifts do not depend on the current"
        )
    r_squared = float(fit.rvalue**2) if np.isfinite(fit.rvalue) else 0.0
    return RegressionFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=r_squared,
        points=len(x),
    )


def fit_injection_slope(campaign: CampaignResult) -> RegressionFit:
    """OLS with intercept of the column shift on the injected current."""
    return fit_line(campaign.injected_currents, campaign.delta_currents)


def calibrate(training: Sequence[Tuple[float, RegressionFit]]) -> CalibrationModel:
    """
    Fit R (kohm) = a * reciprocal_slope + b over cells of known resistance.

    Args:
        training: (known resistance in kohm, regression fit) pairs

    Raises:
        DegenerateDesignError: With fewer than two distinct resistances or
            reciprocal slopes, or a nonpositive gain
    """
    resistances = np.array([r for r, _ in training], dtype=float)
    if len(np.unique(resistances)) < 2:
        raise DegenerateDesignError("Calibration needs at least two distinct training resistances")
    reciprocals = np.array([fit.reciprocal_slope for _, fit in training], dtype=float)
    if not np.all(np.isfinite(reciprocals)) or np.ptp(reciprocals) == 0:
        raise DegenerateDesignError("Calibration training fits have no spread in reciprocal slope")

    line = linregress(reciprocals, resistances)
    if not line.slope > 0:
        raise DegenerateDesignError(f"Calibration gain must be positive, got {line.slope}")
    model = CalibrationModel(
        a=float(line.slope),
        b=float(line.intercept),
        training_resistances=tuple(float(r) for r in resistances),
        r_squared=float(line.rvalue**2),
    )
    logger.info(f"Calibration R = {model.a:.4f} * s + {model.b:.4f} kohm")
    return model


def calibrate_from_campaigns(campaigns: Sequence[CampaignResult]) -> CalibrationModel:
    """Calibrate on campaigns whose true resistance is known."""
    training = []
    for campaign in campaigns:
        if campaign.true_resistance is None:
            raise InputError(f"Campaign on {campaign.target} has no known resistance")
        training.append((campaign.true_resistance / 1e3, fit_injection_slope(campaign)))
    return calibrate(training)


def calibrate_from_fault_table() -> CalibrationModel:
    return calibrate_from_campaigns(fault_table_campaigns())


def training_cells(config: CrossbarConfig, count: int) -> List[Cell]:
    """First `count` cells of the array in row-major order."""
    if count > config.rows * config.cols:
        raise InputError(
            f"Cannot place {count} training cells on a {config.rows}x{config.cols} array"
        )
    return [(k // config.cols, k % config.cols) for k in range(count)]


def place_resistances(
    weights: WeightGrid, cells: Sequence[Cell], resistances_ohm: Sequence[float]
) -> WeightGrid:
    """Copy of the grid with the given cells set to known resistances."""
    array = np.array(weights.resistances)
    for cell, resistance in zip(cells, resistances_ohm):
        array[cell] = resistance
    return WeightGrid(array)


def calibrate_from_simulation(
    config: CrossbarConfig,
    weights: WeightGrid,
    training_resistances_kohm: Sequence[float] = FAULT_TABLE_RESISTANCES_KOHM,
    injection_currents: Sequence[float] = tuple(i * 1e-6 for i in FAULT_TABLE_CURRENTS_UA),
    backend: str = BACKEND_IDEAL,
) -> CalibrationModel:
    """
    Profile reference cells of known resistance on the simulated device.

    The training resistances are written into distinct cells of one copy of
    the grid, so the nodal backend factorizes a single network.
    """
    cells = training_cells(config, len(training_resistances_kohm))
    reference = place_resistances(weights, cells, [r * 1e3 for r in training_resistances_kohm])
    campaigns = run_campaigns(
        config, reference, cells, injection_currents, backend=backend, preset="profiling"
    )
    return calibrate_from_campaigns(campaigns)


def estimate_resistance(
    model: CalibrationModel,
    fit: RegressionFit,
    r_true_kohm: Optional[float] = None,
) -> ResistanceEstimate:
    """R_est = a * reciprocal_slope + b, compared against truth when given."""
    return ResistanceEstimate(
        r_est_kohm=model.predict_kohm(fit.reciprocal_slope),
        r_true_kohm=r_true_kohm,
        fit=fit,
    )


def estimate_cell(
    config: CrossbarConfig,
    resistance_ohm: float,
    injection_currents: Sequence[float],
    model: CalibrationModel,
    backend: str = BACKEND_IDEAL,
) -> ResistanceEstimate:
    """
    Estimate an isolated cell of known resistance.

    The estimate runs on a 1x1 array with the same electrical configuration.
    """
    single = replace(config, rows=1, cols=1)
    grid = WeightGrid(np.array([[resistance_ohm]]))
    campaign = run_campaign(single, grid, (0, 0), injection_currents, backend=backend)
    return estimate_resistance(model, fit_injection_slope(campaign), resistance_ohm / 1e3)


def scan_campaign(
    config: CrossbarConfig,
    weights: WeightGrid,
    geometry: GeometryConfig,
    plan: ScanPlan,
    beam: BeamSpec,
    photocurrents: Sequence[float],
    row_voltages: Optional[Sequence[float]] = None,
) -> List[ScanMeasurement]:
    """One measurement per beam position and photocurrent, ideal backend."""
    check_grid(config, weights)
    if (geometry.rows, geometry.cols) != (config.rows, config.cols):
        raise InputError(
            f"Geometry is {geometry.rows}x{geometry.cols}, crossbar is {config.rows}x{config.cols}"
        )
    voltages = read_scheme_voltages(config) if row_voltages is None else row_voltages
    baseline = ideal_column_currents(config, weights, voltages)

    measurements = []
    for step_index, position in enumerate(plan.positions):
        for current in photocurrents:
            footprint = beam_footprint(geometry, beam.moved_to(position).with_current(current))
            faults = [FaultEvent(cell, share) for cell, share in footprint]
            faulted = faulted_column_currents(config, weights, voltages, faults)
            measurements.append(
                ScanMeasurement(
                    step_index=step_index,
                    position=position,
                    total_photocurrent=float(current),
                    footprint=footprint,
                    delta_currents=delta_current(baseline, faulted),
                )
            )
    logger.info(
        f"Scanned {len(plan.positions)} position(s) at {len(photocurrents)} photocurrent(s)"
    )
    return measurements


def _column_system(
    measurements: Sequence[ScanMeasurement], column: int
) -> Tuple[List[Cell], np.ndarray, np.ndarray]:
    """Design matrix of per-cell currents and the observed shifts for one column."""
    cells = sorted({cell for m in measurements for cell, _ in m.footprint if cell[1] == column})
    index = {cell: k for k, cell in enumerate(cells)}
    rows, b = [], []
    for m in measurements:
        entries = [(index[cell], current) for cell, current in m.footprint if cell[1] == column]
        if not entries:
            continue
        row = np.zeros(len(cells))
        for k, current in entries:
            row[k] += current
        rows.append(row)
        b.append(m.delta_currents[column])
    matrix = np.array(rows) if rows else np.zeros((0, len(cells)))
    return cells, matrix, np.array(b, dtype=float)


def extract_region(
    measurements: Sequence[ScanMeasurement],
    model: CalibrationModel,
    cells: Optional[Sequence[Cell]] = None,
    truth: Optional[WeightGrid] = None,
) -> ExtractionResult:
    """
    Recover cell resistances from overlapping-beam measurements.

    Each column is split into groups of cells that share measurements. A cell
    alone in its group with at least two distinct photocurrents goes through
    the regression and calibration path; larger groups are solved by least
    squares for their divider ratios, which are clamped to (0, 1) and mapped
    through R = a / ratio + b.

    Args:
        measurements: Output of scan_campaign
        model: Calibration mapping divider behaviour to resistance
        cells: Cells that must be recovered; defaults to every illuminated cell
        truth: Ground-truth grid for error reporting

    Raises:
        IdentifiabilityError: If any requested cell is not illuminated or
            lies in the null space of its column system
    """
    illuminated = {cell for m in measurements for cell, _ in m.footprint}
    wanted = sorted(set(cells) if cells is not None else illuminated)
    unresolved = [cell for cell in wanted if cell not in illuminated]

    estimates: Dict[Cell, float] = {}
    ratios: Dict[Cell, float] = {}
    residuals: Dict[int, float] = {}
    clamped: List[Cell] = []

    for column in sorted({cell[1] for cell in illuminated}):
        col_cells, matrix, observed = _column_system(measurements, column)
        pattern = sparse.csr_matrix(matrix != 0, dtype=float)
        n_groups, labels = connected_components(pattern.T @ pattern, directed=False)
        squared_residual = 0.0

        for group in range(n_groups):
            members = np.flatnonzero(labels == group)
            used = np.flatnonzero(np.any(matrix[:, members] != 0, axis=1))
            a_sub = matrix[np.ix_(used, members)]
            b_sub = observed[used]

            if len(members) == 1:
                cell = col_cells[members[0]]
                currents = a_sub[:, 0]
                if len(np.unique(currents)) >= 2 and len(np.unique(currents)) == len(currents):
                    campaign = CampaignResult(
                        target=cell,
                        samples=[
                            CampaignSample(cell, float(i), float(d), column)
                            for i, d in zip(currents, b_sub)
                        ],
                    )
                    fit = fit_injection_slope(campaign)
                    estimate = estimate_resistance(model, fit)
                    estimates[cell] = estimate.r_est_kohm * 1e3
                    ratios[cell] = fit.slope
                    squared_residual += float(
                        np.sum((b_sub - (fit.slope * currents + fit.intercept)) ** 2)
                    )
                    continue

            if a_sub.shape[0] == 0:
                unresolved.extend(col_cells[k] for k in members)
                continue
            _, singular, vt = np.linalg.svd(a_sub, full_matrices=True)
            tolerance = max(a_sub.shape) * np.finfo(float).eps * singular[0]
            rank = int(np.sum(singular > tolerance))
            if rank < len(members):
                null_space = vt[rank:]
                weak = np.max(np.abs(null_space), axis=0) > NULL_SPACE_TOLERANCE
                unresolved.extend(col_cells[members[k]] for k in np.flatnonzero(weak))
                continue

            solution, *_ = np.linalg.lstsq(a_sub, b_sub, rcond=None)
            squared_residual += float(np.sum((a_sub @ solution - b_sub) ** 2))
            for k, ratio in zip(members, solution):
                cell = col_cells[k]
                if not RATIO_FLOOR <= ratio <= 1.0 - RATIO_FLOOR:
                    clamped.append(cell)
                    ratio = float(np.clip(ratio, RATIO_FLOOR, 1.0 - RATIO_FLOOR))
                ratios[cell] = float(ratio)
                estimates[cell] = model.ratio_to_kohm(float(ratio)) * 1e3

        residuals[column] = float(np.sqrt(squared_residual))

    unresolved_wanted = sorted(set(unresolved) & set(wanted))
    if unresolved_wanted:
        raise IdentifiabilityError(
            f"{len(unresolved_wanted)} cell(s) cannot be resolved from the scan, "
            f"first {unresolved_wanted[0]}",
            unresolved_cells=unresolved_wanted,
        )
    if clamped:
        logger.warning(f"Clamped divider ratios of {len(clamped)} cell(s) into (0, 1)")

    estimates = {cell: estimates[cell] for cell in wanted}
    truth_map = (
        {cell: truth.resistance(*cell) for cell in wanted} if truth is not None else None
    )
    result = ExtractionResult(
        estimates_ohm=estimates,
        ratios={cell: ratios[cell] for cell in wanted},
        residuals=residuals,
        clamped_cells=sorted(set(clamped) & set(wanted)),
        truth_ohm=truth_map,
    )
    rms = result.rms_relative_error()
    if rms is not None:
        logger.info(f"Extracted {len(wanted)} cell(s), RMS relative error {rms:.4%}")
    return result


def corrupt_cell(
    params: TeamParams, state: TeamState, waveform: CurrentWaveform
) -> CorruptionResult:
    """Drive one device and report its resistance shift."""
    trajectory = integrate_waveform(params, state, waveform)
    permanent = team_state_derivative(params, trajectory.final_state, 0.0) == 0.0
    result = CorruptionResult(
        r_before=trajectory.initial_resistance,
        r_after=trajectory.final_resistance,
        permanent=permanent,
        trajectory=trajectory,
    )
    logger.info(
        f"Corruption: {result.r_before:.2f} -> {result.r_after:.2f} ohm "
        f"({result.percent_change:+.2f}%)"
    )
    return result


def select_cells(weights: WeightGrid, fraction: float, seed: int) -> List[Cell]:
    """Reproducible random choice of round(fraction * cells) cells, at least one."""
    if not 0 < fraction <= 1:
        raise InputError(f"Cell fraction must be in (0, 1], got {fraction}")
    total = weights.rows * weights.cols
    count = max(1, int(round(fraction * total)))
    rng = np.random.default_rng(seed)
    flat = np.sort(rng.choice(total, size=count, replace=False))
    return [(int(k // weights.cols), int(k % weights.cols)) for k in flat]


def corrupt_weights(
    weights: WeightGrid, cells: Sequence[Cell], corruption: CorruptionResult
) -> WeightGrid:
    """Scale the chosen cells by the corruption's resistance ratio."""
    array = np.array(weights.resistances)
    for row, col in cells:
        array[row, col] *= corruption.resistance_ratio
    return WeightGrid(array)


def inference_impact(
    config: CrossbarConfig,
    weights_before: WeightGrid,
    weights_after: WeightGrid,
    row_inputs: Sequence[Sequence[float]],
) -> ImpactReport:
    """Relative column-current deviation between two grids under the same inputs."""
    if weights_before.shape != weights_after.shape:
        raise InputError(
            f"Grids differ in shape ({weights_before.shape} vs {weights_after.shape})"
        )
    inputs = np.atleast_2d(np.asarray(row_inputs, dtype=float))
    before = np.array([ideal_column_currents(config, weights_before, p).currents for p in inputs])
    after = np.array([ideal_column_currents(config, weights_after, p).currents for p in inputs])

    change = np.abs(after - before)
    scale = np.abs(before)
    relative = np.divide(change, scale, out=np.zeros_like(change), where=scale > 0)
    relative[(scale == 0) & (change > 0)] = np.inf
    return ImpactReport(
        column_deviation=relative.max(axis=0),
        column_mean_deviation=relative.mean(axis=0),
        input_count=len(inputs),
    )


def random_inputs(config: CrossbarConfig, count: int, seed: int) -> np.ndarray:
    """Row-voltage vectors drawn uniformly from [0, read_voltage]."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, config.read_voltage, size=(count, config.rows))
