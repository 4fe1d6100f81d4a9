"""
Laser spot geometry.

A spot illuminates every lattice cell whose centre lies inside its disk. The
photocurrent is shared by profile weight over all such lattice cells; cells
that fall outside the array keep their share, which is simply lost, so only a
spot fully on the array delivers its whole current.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .models.beam import BeamProfile, BeamSpec, GeometryConfig, Region, ScanPlan
from .utils.error_handling import CoverageGapError, InputError

logger = logging.getLogger(__name__)

INCLUSION_TOLERANCE_UM2 = 1e-9
NO_OVERLAP_FLAG = "no overlap"

Footprint = List[Tuple[Tuple[int, int], float]]


def _lattice_in_disk(
    geometry: GeometryConfig, beam: BeamSpec
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rows, cols and squared distances of lattice cells inside the spot."""
    pitch = geometry.cell_pitch
    x, y = beam.center
    r = beam.radius
    cols = np.arange(math.floor((x - r) / pitch), math.ceil((x + r) / pitch) + 1)
    rows = np.arange(math.floor((y - r) / pitch), math.ceil((y + r) / pitch) + 1)
    grid_r, grid_c = np.meshgrid(rows, cols, indexing="ij")
    d2 = (grid_c * pitch - x) ** 2 + (grid_r * pitch - y) ** 2
    inside = d2 <= r * r + INCLUSION_TOLERANCE_UM2
    return grid_r[inside], grid_c[inside], d2[inside]


def beam_footprint(geometry: GeometryConfig, beam: BeamSpec) -> Footprint:
    """
    Per-cell photocurrents of one spot, sorted by (row, col).

    Returns an empty list when no illuminated cell lies on the array.
    """
    rows, cols, d2 = _lattice_in_disk(geometry, beam)
    if beam.profile is BeamProfile.GAUSSIAN:
        weights = np.exp(-d2 / (2.0 * beam.sigma**2))
    else:
        weights = np.ones_like(d2)

    total = weights.sum()
    if total == 0:
        return []
    on_array = (rows >= 0) & (rows < geometry.rows) & (cols >= 0) & (cols < geometry.cols)
    shares = beam.total_photocurrent * weights / total

    footprint = [
        ((int(r), int(c)), float(s))
        for r, c, s in zip(rows[on_array], cols[on_array], shares[on_array])
    ]
    footprint.sort(key=lambda entry: entry[0])
    return footprint


def footprint_fraction(footprint: Footprint, beam: BeamSpec) -> float:
    """Share of the total photocurrent that landed on the array."""
    if beam.total_photocurrent == 0:
        return 0.0
    return sum(current for _, current in footprint) / beam.total_photocurrent


def _axis_positions(start: int, stop: int, pitch: float, step: float, extend: float) -> np.ndarray:
    low = start * pitch - extend
    high = (stop - 1) * pitch + extend
    count = int(math.ceil((high - low) / step - 1e-9)) + 1
    return np.round(low + step * np.arange(count), 9)


def anchored_rows(geometry: GeometryConfig, region: Region) -> Tuple[int, int]:
    """
    Row span the raster must cover for a region to be recoverable.

    Every column is solved on its own, so its chain of overlapping footprints
    needs one end at an array edge, where the off-array share drops out. A
    region touching neither the top nor the bottom edge is stretched to the
    nearer one.
    """
    r0, r1, _, _ = geometry.check_region(region)
    if r0 == 0 or r1 == geometry.rows:
        return r0, r1
    if r0 <= geometry.rows - r1:
        return 0, r1
    return r0, geometry.rows


def raster_positions(
    geometry: GeometryConfig,
    diameter: float,
    step: float,
    region: Optional[Region] = None,
) -> List[Tuple[float, float]]:
    """
    Row-major raster of beam centres over a region.

    The raster starts floor(radius / step) steps before the first region cell
    on each axis and runs as far past the last one, so edge cells are covered
    as often as interior cells. Along rows it also reaches the nearer array
    edge, see anchored_rows.
    """
    region = geometry.check_region(region or geometry.full_region())
    _, _, c0, c1 = region
    r0, r1 = anchored_rows(geometry, region)
    extend = math.floor((diameter / 2.0) / step + 1e-9) * step
    xs = _axis_positions(c0, c1, geometry.cell_pitch, step, extend)
    ys = _axis_positions(r0, r1, geometry.cell_pitch, step, extend)
    return [(float(x), float(y)) for y in ys for x in xs]


def plan_scan(
    geometry: GeometryConfig,
    beam: BeamSpec,
    step: float,
    region: Optional[Region] = None,
) -> ScanPlan:
    """
    Plan an overlapping raster scan of a region.

    Raises:
        InputError: If step is not positive
        CoverageGapError: If step >= 2 * diameter
    """
    if not (np.isfinite(step) and step > 0):
        raise InputError(f"Scan step must be > 0, got {step}")
    if step >= 2.0 * beam.diameter:
        raise CoverageGapError(
            f"Scan step {step} um leaves gaps between {beam.diameter} um footprints "
            f"(must be < {2.0 * beam.diameter} um)"
        )
    region = geometry.check_region(region or geometry.full_region())
    flags = []
    if step >= beam.diameter:
        flags.append(NO_OVERLAP_FLAG)
        logger.warning(
            f"Scan step {step} um >= beam diameter {beam.diameter} um: footprints do not overlap"
        )

    rows = anchored_rows(geometry, region)
    if rows != region[:2]:
        logger.info(f"Raster rows stretched to {rows[0]}..{rows[1] - 1} to reach the array edge")
    positions = raster_positions(geometry, beam.diameter, step, region)
    logger.info(f"Planned {len(positions)} beam position(s) over region {region}")
    return ScanPlan(
        positions=positions,
        step=float(step),
        diameter=beam.diameter,
        region=region,
        flags=flags,
    )


def axis_coverage(
    plan: ScanPlan, geometry: GeometryConfig, region: Optional[Region] = None
) -> Tuple[int, int]:
    """
    Minimum number of distinct raster coordinates within one radius of a
    region cell centre, as (x axis, y axis).
    """
    r0, r1, c0, c1 = geometry.check_region(region or plan.region)
    radius = plan.diameter / 2.0
    xs = np.unique([p[0] for p in plan.positions])
    ys = np.unique([p[1] for p in plan.positions])

    def minimum(coords: np.ndarray, start: int, stop: int) -> int:
        centres = np.arange(start, stop) * geometry.cell_pitch
        hits = np.abs(centres[:, None] - coords[None, :]) <= radius + 1e-9
        return int(hits.sum(axis=1).min())

    return minimum(xs, c0, c1), minimum(ys, r0, r1)


def guaranteed_coverage(diameter: float, step: float) -> int:
    """Per-axis coverage every region cell receives from raster_positions."""
    return int(math.floor(diameter / step + 1e-9))
