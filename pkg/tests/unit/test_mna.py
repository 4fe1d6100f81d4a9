"""
Unit tests for the nodal-analysis solver.
"""

import logging

import numpy as np
import pytest

from crossbar_lfi.crossbar import delta_current, faulted_column_currents, ideal_column_currents
from crossbar_lfi.mna import CrossbarNetwork, Netlist, mna_solve
from crossbar_lfi.models.crossbar import CrossbarConfig, FaultEvent, WeightGrid
from crossbar_lfi.utils.error_handling import InputError, SingularNetworkError


class TestNetlist:
    """Test the generic netlist solver."""

    def test_voltage_divider(self):
        """Test 1 V across 1 kohm and 3 kohm in series."""
        net = Netlist()
        net.add_voltage_source("v", "in", "0", 1.0)
        net.add_resistor("in", "mid", 1000.0)
        net.add_resistor("mid", "0", 3000.0)
        compiled = net.compile()

        z = compiled.rhs()
        x = compiled.solve(z)

        assert compiled.node_voltages(x)["mid"] == pytest.approx(0.75, rel=1e-12)
        assert abs(compiled.source_current(x, "v")) == pytest.approx(2.5e-4, rel=1e-12)
        assert compiled.kcl_residual(x, z) < 1e-12

    def test_current_source_into_resistor(self):
        """Test 1 mA pushed into 2 kohm gives 2 V."""
        net = Netlist()
        net.add_current_source("0", "n", 1e-3)
        net.add_resistor("n", "0", 2000.0)
        compiled = net.compile()

        x = compiled.solve(compiled.rhs())

        assert compiled.node_voltages(x)["n"] == pytest.approx(2.0, rel=1e-12)

    def test_zero_ohm_resistors_merge_nodes(self):
        """Test that a zero-ohm link puts both ends at the same voltage."""
        net = Netlist()
        net.add_voltage_source("v", "in", "0", 0.5)
        net.add_resistor("in", "a", 0.0)
        net.add_resistor("a", "0", 100.0)
        compiled = net.compile()

        voltages = compiled.node_voltages(compiled.solve(compiled.rhs()))

        assert voltages["a"] == pytest.approx(0.5, rel=1e-12)
        assert voltages["in"] == voltages["a"]

    def test_floating_node_is_reported(self):
        """Test that a node without a path to ground names itself."""
        net = Netlist()
        net.add_voltage_source("v", "in", "0", 1.0)
        net.add_resistor("in", "0", 10.0)
        net.add_resistor("a", "b", 100.0)

        with pytest.raises(SingularNetworkError) as exc_info:
            net.compile()

        assert exc_info.value.node in ("a", "b")

    def test_shorted_source(self):
        """Test that a source across merged nodes is singular."""
        net = Netlist()
        net.add_voltage_source("v", "in", "0", 1.0)
        net.add_resistor("in", "0", 0.0)

        with pytest.raises(SingularNetworkError, match="shorted"):
            net.compile()

    def test_invalid_resistance(self):
        """Test that negative resistances are rejected."""
        net = Netlist()
        with pytest.raises(InputError):
            net.add_resistor("a", "b", -1.0)

    def test_duplicate_source_name(self):
        """Test that voltage source names are unique."""
        net = Netlist()
        net.add_voltage_source("v", "a", "0", 1.0)
        with pytest.raises(InputError, match="Duplicate"):
            net.add_voltage_source("v", "b", "0", 1.0)


class TestCrossbarNetwork:
    """Test the crossbar netlist."""

    def test_hand_solved_two_by_two(self, small_config, small_grid):
        """Test a hand-solved 2x2 array with one fault."""
        solution = mna_solve(small_config, small_grid, [0.2, 0.0], [FaultEvent((1, 0), 10e-6)])

        col0 = 0.2 / 2000.0 + 10e-6 * 1000.0 / 4000.0
        col1 = 0.2 / 3000.0
        np.testing.assert_allclose(solution.readout.currents, [col0, col1], rtol=1e-12)
        assert solution.node_voltages["m1_0"] == pytest.approx(10e-6 * 750.0, rel=1e-12)

    def test_wire_resistance_single_cell(self):
        """Test one cell with one wire segment on each side."""
        config = CrossbarConfig(rows=1, cols=1, wire_res_per_segment=1.0)

        solution = mna_solve(config, WeightGrid([[10e3]]), [0.2])

        assert solution.readout.currents[0] == pytest.approx(0.2 / 10002.0, rel=1e-12)

    def test_wire_resistance_lowers_current(self, random_grid):
        """Test that IR drop only ever lowers the column currents."""
        ideal = CrossbarConfig(rows=16, cols=16, wire_res_per_segment=0.0)
        lossy = CrossbarConfig(rows=16, cols=16, wire_res_per_segment=2.0, driver_resistance=10.0)
        voltages = np.full(16, 0.2)

        baseline = mna_solve(ideal, random_grid, voltages).readout.currents
        dropped = mna_solve(lossy, random_grid, voltages).readout.currents

        assert np.all(dropped < baseline)

    def test_kcl_residual_with_parasitics(self, random_grid):
        """Test that the solution balances every node."""
        config = CrossbarConfig(
            rows=16, cols=16, wire_res_per_segment=1.0, driver_resistance=10.0,
            selector_on_resistance=1468.0,
        )
        faults = [FaultEvent((2, 3), 20e-6), FaultEvent((9, 3), 40e-6)]

        solution = mna_solve(config, random_grid, np.full(16, 0.2), faults)

        assert solution.kcl_residual < 1e-12

    def test_explicit_shunt_agrees_with_divider(self, linear_config, random_grid):
        """Test 16x16 random faults against the closed-form divider."""
        config = linear_config.with_explicit_shunt()
        rng = np.random.default_rng(11)
        voltages = rng.uniform(0.0, 0.2, size=16)
        faults = [
            FaultEvent((int(r), int(c)), float(i))
            for r, c, i in zip(
                rng.integers(0, 16, 6), rng.integers(0, 16, 6), rng.uniform(5e-6, 50e-6, 6)
            )
        ]

        network = CrossbarNetwork(config, random_grid)
        baseline = network.column_currents(voltages)
        faulted = network.column_currents(voltages, faults)
        ideal_baseline = ideal_column_currents(config, random_grid, voltages)
        ideal_faulted = faulted_column_currents(config, random_grid, voltages, faults)

        np.testing.assert_allclose(faulted.currents, ideal_faulted.currents, rtol=1e-9)
        np.testing.assert_allclose(
            delta_current(baseline, faulted),
            delta_current(ideal_baseline, ideal_faulted),
            rtol=1e-9,
            atol=1e-18,
        )

    def test_network_is_reused_across_solves(self, small_config, small_grid):
        """Test that one factorization serves several right-hand sides."""
        network = CrossbarNetwork(small_config, small_grid)

        first = network.column_currents([0.2, 0.0])
        second = network.column_currents([0.0, 0.2])

        assert first.currents[0] == pytest.approx(0.2 / 2000.0)
        assert second.currents[1] == pytest.approx(0.2 / 5000.0)

    def test_nonlinear_shunt_is_ignored_with_warning(self, weak_config, random_grid, caplog):
        """Test that gamma > 0 logs a warning."""
        with caplog.at_level(logging.WARNING, logger="crossbar_lfi.mna"):
            CrossbarNetwork(weak_config, random_grid)

        assert "gamma" in caplog.text

    def test_out_of_range_fault(self, small_config, small_grid):
        """Test that a fault target outside the array is rejected."""
        with pytest.raises(InputError):
            mna_solve(small_config, small_grid, [0.2, 0.0], [FaultEvent((0, 5), 1e-6)])
