"""
End-to-end reproduction of the published results.

These tests run the full pipeline at realistic sizes: the fault table on the
default 256x128 array, the calibration and validation cases, the TEAM
corruption and a 16x16 overlapping-scan extraction.
"""

import numpy as np
import pytest

from crossbar_lfi.attack import (
    FAULT_TABLE_DELTA_UA,
    FAULT_TABLE_RESISTANCES_KOHM,
    calibrate_from_simulation,
    calibrate_from_fault_table,
    extract_region,
    place_resistances,
    estimate_cell,
    run_campaigns,
    scan_campaign,
    training_cells,
)
from crossbar_lfi.crossbar import grid_for_config
from crossbar_lfi.laser import axis_coverage, guaranteed_coverage, plan_scan
from crossbar_lfi.models.beam import BeamSpec, GeometryConfig
from crossbar_lfi.models.crossbar import CrossbarConfig
from crossbar_lfi.team import amplitude_sweep, reference_team_initial_state, reference_team_preset

pytestmark = pytest.mark.integration

TABLE_CURRENTS = [10e-6, 15e-6, 20e-6, 30e-6, 40e-6]


def _simulated_table(config, backend):
    weights = grid_for_config(config, seed=0)
    cells = training_cells(config, len(FAULT_TABLE_RESISTANCES_KOHM))
    reference = place_resistances(weights, cells, [r * 1e3 for r in FAULT_TABLE_RESISTANCES_KOHM])
    campaigns = run_campaigns(config, reference, cells, TABLE_CURRENTS, backend=backend)
    return np.array([c.delta_currents * 1e6 for c in campaigns])


class TestFaultTable:
    """Test the fault table on the simulated crossbar."""

    def test_full_size_ideal_backend(self):
        """Test every entry of the table within 2% on the 256x128 array."""
        simulated = _simulated_table(CrossbarConfig(), "ideal")

        errors = np.abs(simulated - FAULT_TABLE_DELTA_UA) / FAULT_TABLE_DELTA_UA
        assert errors.max() < 0.02

    @pytest.mark.slow
    def test_nodal_backend_with_wires(self):
        """Test the table on a 32x32 array with 1 ohm wire segments."""
        simulated = _simulated_table(CrossbarConfig(rows=32, cols=32), "mna")

        errors = np.abs(simulated - FAULT_TABLE_DELTA_UA) / FAULT_TABLE_DELTA_UA
        assert errors.max() < 0.03

    def test_shift_ordering(self):
        """Test that shifts grow with current and shrink with resistance."""
        simulated = _simulated_table(CrossbarConfig(rows=8, cols=8), "ideal")

        assert np.all(np.diff(simulated, axis=1) > 0)
        assert np.all(np.diff(simulated, axis=0) < 0)


class TestValidationCases:
    """Test resistance estimation against the published validation cases."""

    def test_linear_two_point(self):
        """Test the 17 kohm two-point estimate on the linear preset."""
        estimate = estimate_cell(CrossbarConfig(), 17e3, [15e-6, 20e-6], calibrate_from_fault_table())

        assert estimate.r_est_kohm == pytest.approx(17.408, rel=2e-3)
        assert estimate.accuracy_pct > 97.0

    def test_weak_nonlinear_cases(self):
        """Test that more points help and out-of-range currents hurt."""
        config = CrossbarConfig(shunt_resistance_r_sh0=1470.0, shunt_nonlinearity_gamma=400.0)
        model = calibrate_from_fault_table()

        two = estimate_cell(config, 17e3, [15e-6, 20e-6], model).error_pct
        multi = estimate_cell(config, 17e3, [15e-6, 20e-6, 30e-6, 40e-6], model).error_pct
        inside = estimate_cell(config, 10e3, [12e-6, 15e-6, 20e-6, 30e-6, 40e-6], model).error_pct
        outside = estimate_cell(config, 10e3, [50e-6, 75e-6, 100e-6], model).error_pct

        assert two < 2.0
        assert multi < two
        assert abs(multi - 0.35) <= 1.5
        assert outside >= 3.0 * inside


class TestCorruption:
    """Test the TEAM corruption experiment."""

    def test_reference_drive(self):
        """Test that 1.2 mA for 100 us moves 138 ohm by about 143%."""
        params = reference_team_preset()
        finals = amplitude_sweep(
            params, reference_team_initial_state(params), [10e-6, 100e-6, 600e-6, 1.2e-3]
        )

        change = 100.0 * (finals - 138.0) / 138.0
        assert change[0] == 0.0
        assert np.all(np.diff(change) > 0)
        assert change[-1] == pytest.approx(143.0, rel=0.05)


class TestScanExtraction:
    """Test recovery of a 16x16 region from an overlapping scan."""

    def test_sixteen_by_sixteen_region(self):
        """Test a 3 um spot stepped by 1 um over a 16x16 array."""
        config = CrossbarConfig(rows=16, cols=16)
        geometry = GeometryConfig(cell_pitch=1.0, rows=16, cols=16)
        weights = grid_for_config(config, seed=5)
        beam = BeamSpec(center=(0.0, 0.0), diameter=3.0, total_photocurrent=20e-6)
        plan = plan_scan(geometry, beam, step=1.0)

        assert min(axis_coverage(plan, geometry)) >= guaranteed_coverage(3.0, 1.0) == 3

        model = calibrate_from_simulation(config, weights)
        measurements = scan_campaign(config, weights, geometry, plan, beam, [20e-6, 40e-6])
        result = extract_region(measurements, model, truth=weights)

        assert len(result.cells) == 256
        assert result.rms_relative_error() < 1e-6
