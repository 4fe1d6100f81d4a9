"""
Unit tests for laser footprints and raster scan planning.
"""

import logging

import pytest

from crossbar_lfi.laser import (
    NO_OVERLAP_FLAG,
    anchored_rows,
    axis_coverage,
    beam_footprint,
    footprint_fraction,
    guaranteed_coverage,
    plan_scan,
    raster_positions,
)
from crossbar_lfi.models.beam import BeamProfile, BeamSpec, GeometryConfig
from crossbar_lfi.utils.error_handling import CoverageGapError, InputError


def _spot(diameter, center=(8.0, 8.0), current=20e-6, profile=BeamProfile.UNIFORM_DISK):
    return BeamSpec(center=center, diameter=diameter, total_photocurrent=current, profile=profile)


class TestBeamFootprint:
    """Test per-cell photocurrent shares."""

    @pytest.mark.parametrize("diameter,cells", [(1.0, 1), (3.0, 9)])
    def test_small_spot_sizes(self, geometry_16, diameter, cells):
        """Test the number of cells inside 1 um and 3 um spots."""
        footprint = beam_footprint(geometry_16, _spot(diameter))

        assert len(footprint) == cells

    def test_largest_spot(self, geometry_large):
        """Test that a 50 um spot covers every lattice point within 25 um."""
        footprint = beam_footprint(geometry_large, _spot(50.0, center=(64.0, 64.0)))

        assert len(footprint) == 1961

    def test_uniform_shares_sum_to_total(self, geometry_16):
        """Test that a spot fully on the array delivers its whole current."""
        beam = _spot(3.0, current=40e-6)
        footprint = beam_footprint(geometry_16, beam)

        assert footprint_fraction(footprint, beam) == pytest.approx(1.0)
        assert all(share == pytest.approx(40e-6 / 9) for _, share in footprint)

    def test_sorted_by_cell(self, geometry_16):
        """Test that the footprint is ordered by (row, col)."""
        cells = [cell for cell, _ in beam_footprint(geometry_16, _spot(3.0))]

        assert cells == sorted(cells)
        assert cells[0] == (7, 7)
        assert cells[-1] == (9, 9)

    def test_edge_spot_loses_off_array_share(self, geometry_16):
        """Test that a corner spot keeps only the on-array share."""
        beam = _spot(3.0, center=(0.0, 0.0), current=18e-6)
        footprint = beam_footprint(geometry_16, beam)

        assert [cell for cell, _ in footprint] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert footprint_fraction(footprint, beam) == pytest.approx(4 / 9)

    def test_spot_off_array(self, geometry_16):
        """Test that a spot entirely off the array illuminates nothing."""
        assert beam_footprint(geometry_16, _spot(3.0, center=(-10.0, -10.0))) == []

    def test_gaussian_profile(self, geometry_16):
        """Test that a Gaussian spot peaks at its centre and conserves current."""
        beam = _spot(3.0, profile=BeamProfile.GAUSSIAN)
        shares = dict(beam_footprint(geometry_16, beam))

        assert shares[(8, 8)] > shares[(8, 9)] > shares[(9, 9)]
        assert sum(shares.values()) == pytest.approx(20e-6)

    def test_pitch_scales_footprint(self):
        """Test that a 2 um pitch puts five cells under a 4 um spot."""
        geometry = GeometryConfig(cell_pitch=2.0, rows=16, cols=16)

        footprint = beam_footprint(geometry, _spot(4.0, center=(8.0, 8.0)))

        assert [cell for cell, _ in footprint] == [(3, 4), (4, 3), (4, 4), (4, 5), (5, 4)]

    @pytest.mark.parametrize("profile", [BeamProfile.UNIFORM_DISK, BeamProfile.GAUSSIAN])
    def test_translation_by_one_pitch(self, geometry_16, profile):
        """Test that moving the centre by one pitch shifts every cell by one index."""
        base = beam_footprint(geometry_16, _spot(3.0, center=(8.0, 8.0), profile=profile))
        right = beam_footprint(geometry_16, _spot(3.0, center=(9.0, 8.0), profile=profile))
        down = beam_footprint(geometry_16, _spot(3.0, center=(8.0, 9.0), profile=profile))

        assert right == [((r, c + 1), share) for (r, c), share in base]
        assert down == [((r + 1, c), share) for (r, c), share in base]

    def test_footprint_is_deterministic(self, geometry_16):
        """Test that identical inputs give identical footprints."""
        beam = _spot(5.0, center=(7.3, 6.8), profile=BeamProfile.GAUSSIAN)

        assert beam_footprint(geometry_16, beam) == beam_footprint(geometry_16, beam)

    @pytest.mark.parametrize("diameter", [0.5, 51.0])
    def test_diameter_out_of_range(self, diameter):
        """Test that diameters outside 1 to 50 um are rejected."""
        with pytest.raises(InputError, match="beam diameter must be within"):
            _spot(diameter)

    def test_negative_photocurrent(self):
        """Test that a negative photocurrent is rejected."""
        with pytest.raises(InputError):
            _spot(3.0, current=-1e-6)


class TestRasterScan:
    """Test raster planning and coverage."""

    def test_overlapping_plan(self, geometry_16):
        """Test a 3 um spot stepped by 1 um over a 16x16 region."""
        plan = plan_scan(geometry_16, _spot(3.0), step=1.0)

        assert len(plan) == 18 * 18
        assert plan.positions[0] == (-1.0, -1.0)
        assert plan.positions[-1] == (16.0, 16.0)
        assert plan.overlapping
        assert plan.flags == []

    def test_row_major_order(self, geometry_16):
        """Test that x varies fastest."""
        positions = raster_positions(geometry_16, 3.0, 1.0, (0, 2, 0, 2))

        assert positions[:5] == [(-1.0, -1.0), (0.0, -1.0), (1.0, -1.0), (2.0, -1.0), (-1.0, 0.0)]

    @pytest.mark.parametrize("diameter,step", [(3.0, 1.0), (3.0, 2.0), (5.0, 1.5), (1.0, 1.0)])
    def test_coverage_guarantee(self, geometry_16, diameter, step):
        """Test that every region cell is covered at least floor(D / step) times per axis."""
        plan = plan_scan(geometry_16, _spot(diameter), step=step, region=(2, 14, 3, 12))

        x_cov, y_cov = axis_coverage(plan, geometry_16)

        assert min(x_cov, y_cov) >= guaranteed_coverage(diameter, step)

    def test_non_overlapping_step_is_flagged(self, geometry_16, caplog):
        """Test that step >= D is allowed but flagged."""
        with caplog.at_level(logging.WARNING, logger="crossbar_lfi.laser"):
            plan = plan_scan(geometry_16, _spot(3.0), step=3.0)

        assert NO_OVERLAP_FLAG in plan.flags
        assert not plan.overlapping
        assert "do not overlap" in caplog.text

    def test_gap_step_rejected(self, geometry_16):
        """Test that step >= 2D leaves gaps."""
        with pytest.raises(CoverageGapError):
            plan_scan(geometry_16, _spot(3.0), step=6.0)

    def test_nonpositive_step(self, geometry_16):
        """Test that a zero step is rejected."""
        with pytest.raises(InputError):
            plan_scan(geometry_16, _spot(3.0), step=0.0)

    def test_region_outside_array(self, geometry_16):
        """Test that a region past the array edge is rejected."""
        with pytest.raises(InputError):
            plan_scan(geometry_16, _spot(3.0), step=1.0, region=(0, 17, 0, 4))

    def test_interior_region_reaches_nearer_edge(self):
        """Test that a region away from both row edges is scanned from the nearer one."""
        geometry = GeometryConfig(cell_pitch=1.0, rows=32, cols=32)

        assert anchored_rows(geometry, (8, 24, 8, 24)) == (0, 24)
        assert anchored_rows(geometry, (20, 28, 0, 4)) == (20, 32)
        assert anchored_rows(geometry, (0, 8, 0, 4)) == (0, 8)

        plan = plan_scan(geometry, _spot(3.0), step=1.0, region=(8, 24, 8, 24))
        ys = sorted({y for _, y in plan.positions})
        assert (ys[0], ys[-1]) == (-1.0, 24.0)
        assert plan.region == (8, 24, 8, 24)

    def test_plan_frame(self, geometry_16):
        """Test the scan plan table columns."""
        frame = plan_scan(geometry_16, _spot(1.0), step=1.0, region=(0, 2, 0, 2)).to_frame()

        assert list(frame.columns) == ["step_index", "x_um", "y_um"]
        assert frame["step_index"].tolist() == [0, 1, 2, 3]
