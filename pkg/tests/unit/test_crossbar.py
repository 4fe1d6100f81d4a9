"""
Unit tests for the ideal crossbar model.

Covers fault-free column currents, the fault current divider, readout
differences, read scheme, weight grid generation and CSV storage.
"""

import numpy as np
import pytest

from crossbar_lfi.crossbar import (
    delta_current,
    divider_ratio,
    fault_delta,
    faulted_column_currents,
    ideal_column_currents,
    load_readout,
    load_weight_grid,
    random_weight_grid,
    read_scheme_voltages,
    save_readout,
    save_weight_grid,
)
from crossbar_lfi.mna import mna_solve
from crossbar_lfi.models.crossbar import ColumnReadout, CrossbarConfig, FaultEvent, WeightGrid
from crossbar_lfi.utils.error_handling import DomainError, InputError


class TestIdealColumnCurrents:
    """Test fault-free column currents."""

    def test_zero_input_gives_zero_currents(self, linear_config, random_grid):
        """Test that grounded rows produce no column current."""
        readout = ideal_column_currents(linear_config, random_grid, np.zeros(16))

        assert np.all(readout.currents == 0.0)
        assert len(readout) == 16

    def test_single_cell_ohms_law(self):
        """Test 0.2 V across 10 kohm gives 20 uA."""
        config = CrossbarConfig(rows=1, cols=1)
        grid = WeightGrid([[10e3]])

        readout = ideal_column_currents(config, grid, [0.2])

        assert readout.currents[0] == pytest.approx(20e-6, rel=1e-12)

    def test_matches_nodal_analysis_without_parasitics(self):
        """Test a random 4x4 instance against the nodal-analysis solver."""
        rng = np.random.default_rng(7)
        config = CrossbarConfig(rows=4, cols=4, wire_res_per_segment=0.0)
        grid = WeightGrid(rng.uniform(5e3, 20e3, size=(4, 4)))
        voltages = rng.uniform(0.0, 0.2, size=4)

        ideal = ideal_column_currents(config, grid, voltages)
        oracle = mna_solve(config, grid, voltages).readout

        np.testing.assert_allclose(ideal.currents, oracle.currents, rtol=1e-9, atol=0)

    def test_selector_resistance_is_folded_into_cells(self):
        """Test that the selector adds in series with every cell."""
        config = CrossbarConfig(rows=1, cols=2, selector_on_resistance=500.0)
        grid = WeightGrid([[9500.0, 19500.0]])

        readout = ideal_column_currents(config, grid, [0.2])

        np.testing.assert_allclose(readout.currents, [20e-6, 10e-6], rtol=1e-12)

    def test_row_voltage_length_mismatch(self, linear_config, random_grid):
        """Test that a wrong-length input vector is an input error."""
        with pytest.raises(InputError, match="row_voltages"):
            ideal_column_currents(linear_config, random_grid, np.zeros(15))

    def test_grid_shape_mismatch(self, linear_config):
        """Test that a grid of the wrong size is an input error."""
        with pytest.raises(InputError, match="expects 16x16"):
            ideal_column_currents(linear_config, WeightGrid(np.full((4, 4), 1e4)), np.zeros(16))

    def test_nonpositive_resistance_is_domain_error(self):
        """Test that zero or negative resistances are rejected."""
        with pytest.raises(DomainError, match="strictly positive"):
            WeightGrid([[1e4, 0.0]])
        with pytest.raises(DomainError):
            WeightGrid([[1e4, -5.0]])
        with pytest.raises(DomainError, match="finite"):
            WeightGrid([[np.inf]])


class TestFaultedColumnCurrents:
    """Test the fault current divider."""

    def test_zero_injection_changes_nothing(self, linear_config, random_grid):
        """Test that a zero photocurrent leaves every column unchanged."""
        voltages = read_scheme_voltages(linear_config)
        baseline = ideal_column_currents(linear_config, random_grid, voltages)
        faulted = faulted_column_currents(
            linear_config, random_grid, voltages, [FaultEvent((3, 4), 0.0)]
        )

        assert np.all(delta_current(baseline, faulted) == 0.0)

    def test_ten_kohm_twenty_microamps(self):
        """Test 10 kohm at 20 uA against the published 2.58 uA."""
        config = CrossbarConfig(rows=1, cols=1)
        delta = fault_delta(config, 10e3, 20e-6)

        assert delta == pytest.approx(20e-6 * 1468.0 / 11468.0, rel=1e-12)
        assert delta == pytest.approx(2.58e-6, rel=0.02)

    def test_five_kohm_ten_microamps(self):
        """Test 5 kohm at 10 uA against the published 2.29 uA."""
        config = CrossbarConfig(rows=2, cols=2)
        grid = WeightGrid([[5e3, 8e3], [12e3, 20e3]])
        voltages = read_scheme_voltages(config)

        baseline = ideal_column_currents(config, grid, voltages)
        faulted = faulted_column_currents(config, grid, voltages, [FaultEvent((0, 0), 10e-6)])

        assert delta_current(baseline, faulted)[0] == pytest.approx(2.29e-6, rel=0.02)

    def test_single_fault_matches_nodal_analysis(self, small_config, small_grid):
        """Test one fault on a 2x2 array against nodal analysis."""
        voltages = [0.2, 0.0]
        faults = [FaultEvent((1, 0), 10e-6)]

        ideal = faulted_column_currents(small_config, small_grid, voltages, faults)
        oracle = mna_solve(small_config, small_grid, voltages, faults).readout

        np.testing.assert_allclose(ideal.currents, oracle.currents, rtol=1e-9, atol=0)

    def test_fault_only_moves_target_column(self, linear_config, random_grid):
        """Test that a fault shifts its own column and no other."""
        voltages = read_scheme_voltages(linear_config)
        baseline = ideal_column_currents(linear_config, random_grid, voltages)
        faulted = faulted_column_currents(
            linear_config, random_grid, voltages, [FaultEvent((5, 9), 25e-6)]
        )

        delta = delta_current(baseline, faulted)
        assert delta[9] > 0
        assert np.count_nonzero(delta) == 1

    def test_superposition_of_simultaneous_faults(self, linear_config, random_grid):
        """Test that k simultaneous faults add up to the individual shifts."""
        voltages = read_scheme_voltages(linear_config)
        baseline = ideal_column_currents(linear_config, random_grid, voltages)
        faults = [
            FaultEvent((0, 2), 10e-6),
            FaultEvent((7, 2), 30e-6),
            FaultEvent((3, 11), 15e-6),
            FaultEvent((15, 15), 40e-6),
        ]

        combined = delta_current(
            baseline, faulted_column_currents(linear_config, random_grid, voltages, faults)
        )
        separate = sum(
            delta_current(
                baseline, faulted_column_currents(linear_config, random_grid, voltages, [f])
            )
            for f in faults
        )

        np.testing.assert_allclose(combined, separate, rtol=1e-9, atol=1e-18)

    def test_divider_bounds_and_monotonicity(self, linear_config):
        """Test 0 < dI/I < 1 and strictly decreasing in cell resistance."""
        resistances = np.linspace(5e3, 20e3, 16)
        ratios = np.array([divider_ratio(linear_config, r, 20e-6) for r in resistances])

        assert np.all((ratios > 0) & (ratios < 1))
        assert np.all(np.diff(ratios) < 0)

    def test_linear_preset_is_proportional_to_current(self, linear_config):
        """Test that with gamma = 0 the shift is exactly proportional to the current."""
        ratios = [fault_delta(linear_config, 12e3, i) / i for i in (10e-6, 20e-6, 40e-6)]

        assert ratios[0] == pytest.approx(ratios[1], rel=1e-14)
        assert ratios[0] == pytest.approx(ratios[2], rel=1e-14)

    def test_nonlinear_return_path_grows_with_current(self, weak_config):
        """Test that gamma > 0 makes the divider ratio rise with current."""
        low = divider_ratio(weak_config, 10e3, 10e-6)
        high = divider_ratio(weak_config, 10e3, 40e-6)

        assert high > low
        assert weak_config.shunt_resistance(40e-6) == pytest.approx(1470.0 * 1.016)

    def test_negative_current_rejected(self):
        """Test that a negative photocurrent is an input error."""
        with pytest.raises(InputError, match=">= 0"):
            FaultEvent((0, 0), -1e-6)

    def test_target_out_of_bounds(self, small_config, small_grid):
        """Test that a fault outside the array is an input error."""
        with pytest.raises(InputError, match="outside the 2x2 array"):
            faulted_column_currents(small_config, small_grid, [0.2, 0.0], [FaultEvent((2, 0), 1e-6)])


class TestDeltaCurrent:
    """Test readout differences."""

    def test_identical_readouts(self):
        """Test that identical readouts differ by zero everywhere."""
        readout = ColumnReadout([1e-6, 2e-6, 3e-6])

        assert np.all(delta_current(readout, readout) == 0.0)

    def test_length_mismatch(self):
        """Test that readouts of different lengths are rejected."""
        with pytest.raises(InputError, match="different lengths"):
            delta_current(ColumnReadout([1e-6]), ColumnReadout([1e-6, 2e-6]))


class TestReadSchemeAndGrids:
    """Test the read scheme, random grids and CSV storage."""

    def test_single_row_read_scheme(self, linear_config):
        """Test that one row is driven at the read voltage and the rest grounded."""
        voltages = read_scheme_voltages(linear_config, driven_row=3)

        assert voltages[3] == 0.2
        assert np.count_nonzero(voltages) == 1

    def test_driven_row_out_of_range(self, linear_config):
        """Test that driving a missing row is an input error."""
        with pytest.raises(InputError):
            read_scheme_voltages(linear_config, driven_row=16)

    def test_random_grid_is_seeded(self):
        """Test that equal seeds give equal grids within bounds."""
        first = random_weight_grid(8, 4, seed=3)
        second = random_weight_grid(8, 4, seed=3)
        other = random_weight_grid(8, 4, seed=4)

        assert first == second
        assert first != other
        assert first.resistances.min() >= 5e3
        assert first.resistances.max() <= 20e3

    def test_with_cell_returns_modified_copy(self, small_grid):
        """Test that with_cell leaves the original untouched."""
        changed = small_grid.with_cell(1, 1, 9999.0)

        assert changed.resistance(1, 1) == 9999.0
        assert small_grid.resistance(1, 1) == 4000.0

    def test_weight_grid_csv(self, tmp_path, random_grid):
        """Test storing and loading a weight grid as row,col,r_ohm."""
        path = save_weight_grid(tmp_path / "weights.csv", random_grid)

        assert path.read_text().splitlines()[0] == "row,col,r_ohm"
        loaded = load_weight_grid(path)
        np.testing.assert_allclose(loaded.resistances, random_grid.resistances, rtol=1e-11)

    def test_readout_csv(self, tmp_path):
        """Test storing a readout as col,i_amps."""
        path = save_readout(tmp_path / "readout.csv", ColumnReadout([1e-6, 2.5e-6]))

        assert path.read_text().splitlines() == ["col,i_amps", "0,1e-06", "1,2.5e-06"]
        assert load_readout(path).currents.tolist() == [1e-6, 2.5e-6]


class TestCrossbarConfig:
    """Test configuration validation."""

    def test_defaults(self):
        """Test the defaults of the linear preset."""
        config = CrossbarConfig()

        assert (config.rows, config.cols) == (256, 128)
        assert config.shunt_resistance_r_sh0 == 1468.0
        assert config.is_linear

    def test_invalid_values(self):
        """Test rejected dimensions and resistances."""
        with pytest.raises(InputError):
            CrossbarConfig(rows=0)
        with pytest.raises(DomainError):
            CrossbarConfig(shunt_resistance_r_sh0=0.0)
        with pytest.raises(DomainError):
            CrossbarConfig(wire_res_per_segment=-1.0)

    def test_explicit_shunt_copy(self):
        """Test that the explicit-shunt copy moves r_sh0 into the access resistor."""
        config = CrossbarConfig(shunt_resistance_r_sh0=1500.0).with_explicit_shunt()

        assert config.selector_on_resistance == 1500.0
