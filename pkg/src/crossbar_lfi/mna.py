"""
Modified nodal analysis of resistive networks.

A Netlist holds resistors, independent current sources and independent
voltage sources between named nodes; "0" is ground. Zero-ohm resistors merge
their end nodes. compile() assembles the sparse MNA system

    [ G   B ] [v]   [J]
    [ B^T 0 ] [i] = [E]

factorizes it once with SuperLU and then solves any number of right-hand
sides. A voltage-source branch current is the current flowing from its
positive node through the source to its negative node.

CrossbarNetwork lays a 1T1R array out on top of a Netlist: row drivers with
source impedance, segmented row and column wires, an access resistance and an
injection node per cell, and 0 V sense sources at the column ends.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import splu

from .crossbar import check_faults, check_grid, check_row_voltages
from .models.crossbar import ColumnReadout, CrossbarConfig, FaultEvent, WeightGrid
from .utils.error_handling import InputError, SingularNetworkError
from .utils.validation import check_resistances

logger = logging.getLogger(__name__)

GROUND = "0"
REFINEMENT_STEPS = 2


class _NodeMerger:
    """Union-find over node names; ground always wins as representative."""

    def __init__(self):
        self._parent: Dict[str, str] = {}

    def find(self, node: str) -> str:
        self._parent.setdefault(node, node)
        root = node
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[node] != root:
            self._parent[node], node = root, self._parent[node]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if rb == GROUND or (ra != GROUND and rb < ra):
            ra, rb = rb, ra
        self._parent[rb] = ra


class Netlist:
    """Resistors, current sources and voltage sources between named nodes."""

    def __init__(self):
        self.resistors: List[Tuple[str, str, float]] = []
        self.current_sources: List[Tuple[str, str, float]] = []
        self.voltage_sources: List[Tuple[str, str, str, float]] = []
        self._merger = _NodeMerger()
        self._nodes: Dict[str, None] = {GROUND: None}

    def _touch(self, *nodes: str) -> None:
        for node in nodes:
            self._nodes.setdefault(node, None)
            self._merger.find(node)

    def add_resistor(self, a: str, b: str, resistance: float) -> None:
        """Add a resistor; zero ohms merges a and b into one node."""
        if not np.isfinite(resistance) or resistance < 0:
            raise InputError(f"Resistor {a}-{b} has invalid resistance {resistance}")
        self._touch(a, b)
        if resistance == 0.0:
            self._merger.union(a, b)
        else:
            self.resistors.append((a, b, float(resistance)))

    def add_current_source(self, a: str, b: str, current: float) -> None:
        """Current source driving `current` amperes out of a and into b."""
        self._touch(a, b)
        self.current_sources.append((a, b, float(current)))

    def add_voltage_source(self, name: str, pos: str, neg: str, voltage: float) -> None:
        """Ideal source holding v(pos) - v(neg) = voltage."""
        if any(existing[0] == name for existing in self.voltage_sources):
            raise InputError(f"Duplicate voltage source name '{name}'")
        self._touch(pos, neg)
        self.voltage_sources.append((name, pos, neg, float(voltage)))

    @property
    def nodes(self) -> List[str]:
        return list(self._nodes)

    def compile(self) -> "CompiledNetwork":
        return CompiledNetwork(self)


class CompiledNetwork:
    """Factorized MNA system of a Netlist."""

    def __init__(self, netlist: Netlist):
        merger = netlist._merger
        self.node_names = netlist.nodes
        self.representative = {node: merger.find(node) for node in self.node_names}

        unknowns = sorted({rep for rep in self.representative.values() if rep != GROUND})
        self.index = {node: k for k, node in enumerate(unknowns)}
        self.unknowns = unknowns
        self.source_names = [vs[0] for vs in netlist.voltage_sources]
        self.source_index = {name: k for k, name in enumerate(self.source_names)}
        n, m = len(unknowns), len(self.source_names)
        self.n, self.m = n, m

        def idx(node: str) -> int:
            rep = self.representative[node]
            return -1 if rep == GROUND else self.index[rep]

        res = [(idx(a), idx(b), 1.0 / r) for a, b, r in netlist.resistors]
        res = [(a, b, g) for a, b, g in res if a != b]
        self.edge_a = np.array([e[0] for e in res], dtype=int)
        self.edge_b = np.array([e[1] for e in res], dtype=int)
        self.edge_g = np.array([e[2] for e in res], dtype=float)

        self.src_pos = np.array([idx(vs[1]) for vs in netlist.voltage_sources], dtype=int)
        self.src_neg = np.array([idx(vs[2]) for vs in netlist.voltage_sources], dtype=int)
        self.src_values = np.array([vs[3] for vs in netlist.voltage_sources], dtype=float)
        for name, pos_node, neg_node, _ in netlist.voltage_sources:
            if self.representative[pos_node] == self.representative[neg_node]:
                raise SingularNetworkError(
                    f"Voltage source '{name}' is shorted", node=pos_node
                )

        self.cur_a = np.array([idx(cs[0]) for cs in netlist.current_sources], dtype=int)
        self.cur_b = np.array([idx(cs[1]) for cs in netlist.current_sources], dtype=int)
        self.cur_values = np.array([cs[2] for cs in netlist.current_sources], dtype=float)

        self._check_connected()
        self.matrix = self._assemble()
        try:
            self._lu = splu(self.matrix)
        except RuntimeError as e:
            raise SingularNetworkError(f"MNA matrix is singular: {e}") from e
        logger.debug(f"Factorized MNA system with {n} node(s) and {m} voltage source(s)")

    def _check_connected(self) -> None:
        """Every node needs a conductive or source path to ground."""
        ground = self.n
        a = np.concatenate([self.edge_a, self.src_pos])
        b = np.concatenate([self.edge_b, self.src_neg])
        a = np.where(a < 0, ground, a)
        b = np.where(b < 0, ground, b)
        graph = sparse.coo_matrix(
            (np.ones(len(a)), (a, b)), shape=(self.n + 1, self.n + 1)
        )
        _, labels = connected_components(graph, directed=False)
        floating = np.flatnonzero(labels[: self.n] != labels[ground])
        if floating.size:
            node = self.unknowns[int(floating[0])]
            raise SingularNetworkError(
                f"Node '{node}' has no path to ground ({floating.size} floating node(s))",
                node=node,
            )

    def _assemble(self) -> sparse.csc_matrix:
        n, m = self.n, self.m
        rows: List[np.ndarray] = []
        cols: List[np.ndarray] = []
        vals: List[np.ndarray] = []

        a, b, g = self.edge_a, self.edge_b, self.edge_g
        for p, q, sign in ((a, a, 1.0), (b, b, 1.0), (a, b, -1.0), (b, a, -1.0)):
            keep = (p >= 0) & (q >= 0)
            rows.append(p[keep])
            cols.append(q[keep])
            vals.append(sign * g[keep])

        k = np.arange(m) + n
        for node, sign in ((self.src_pos, 1.0), (self.src_neg, -1.0)):
            keep = node >= 0
            rows.append(node[keep])
            cols.append(k[keep])
            vals.append(np.full(keep.sum(), sign))
            rows.append(k[keep])
            cols.append(node[keep])
            vals.append(np.full(keep.sum(), sign))

        matrix = sparse.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n + m, n + m),
        )
        return matrix.tocsc()

    def rhs(
        self,
        injections: Optional[np.ndarray] = None,
        source_values: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        """Right-hand side from netlist sources plus extra node injections."""
        z = np.zeros(self.n + self.m)
        for a, b, value in zip(self.cur_a, self.cur_b, self.cur_values):
            if a >= 0:
                z[a] -= value
            if b >= 0:
                z[b] += value
        if injections is not None:
            z[: self.n] += injections
        z[self.n :] = self.src_values if source_values is None else source_values
        return z

    def residual(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        """
        Branch-form residual z - A x.

        Node rows sum g * (va - vb) per resistor instead of using the assembled
        matrix, which avoids cancellation between nearly equal node voltages.
        """
        n = self.n
        v = np.append(x[:n], 0.0)  # index -1 reads ground
        branch = self.edge_g * (v[self.edge_a] - v[self.edge_b])
        out = np.zeros(n + 1)
        np.add.at(out, self.edge_a, branch)
        np.add.at(out, self.edge_b, -branch)
        currents = x[n:]
        np.add.at(out, self.src_pos, currents)
        np.add.at(out, self.src_neg, -currents)

        r = np.empty_like(z)
        r[:n] = z[:n] - out[:n]
        r[n:] = z[n:] - (v[self.src_pos] - v[self.src_neg])
        return r

    def solve(self, z: np.ndarray) -> np.ndarray:
        """Solve A x = z with iterative refinement."""
        x = self._lu.solve(z)
        for _ in range(REFINEMENT_STEPS):
            x = x + self._lu.solve(self.residual(x, z))
        if not np.all(np.isfinite(x)):
            raise SingularNetworkError("MNA solve produced non-finite values")
        return x

    def kcl_residual(self, x: np.ndarray, z: np.ndarray) -> float:
        """Largest node current imbalance relative to the largest branch current."""
        n = self.n
        v = np.append(x[:n], 0.0)
        branch = np.abs(self.edge_g * (v[self.edge_a] - v[self.edge_b]))
        scale = max(
            branch.max(initial=0.0),
            np.abs(x[n:]).max(initial=0.0),
            np.abs(z[:n]).max(initial=0.0),
        )
        worst = np.abs(self.residual(x, z)[:n]).max(initial=0.0)
        return 0.0 if scale == 0.0 else float(worst / scale)

    def node_voltages(self, x: np.ndarray) -> Dict[str, float]:
        """Voltage of every netlist node, merged nodes included."""
        voltages = {}
        for node in self.node_names:
            rep = self.representative[node]
            voltages[node] = 0.0 if rep == GROUND else float(x[self.index[rep]])
        return voltages

    def source_current(self, x: np.ndarray, name: str) -> float:
        return float(x[self.n + self.source_index[name]])


@dataclass
class MnaSolution:
    """Node voltages, column readout and KCL residual of one solve."""

    node_voltages: Dict[str, float]
    readout: ColumnReadout
    kcl_residual: float


def _row_node(i: int, j: int) -> str:
    return f"r{i}_{j}"


def _cell_node(i: int, j: int) -> str:
    return f"m{i}_{j}"


def _col_node(i: int, j: int) -> str:
    return f"c{i}_{j}"


class CrossbarNetwork:
    """
    Nodal-analysis model of a crossbar, factorized once per (config, weights).

    Faults and row voltages only change the right-hand side, so a campaign
    reuses the same factorization.
    """

    def __init__(self, config: CrossbarConfig, weights: WeightGrid):
        check_grid(config, weights)
        check_resistances("cell resistances", weights.resistances)
        if not config.is_linear:
            logger.warning(
                "Nodal analysis models the return path as a linear resistor; "
                f"shunt nonlinearity gamma={config.shunt_nonlinearity_gamma} is ignored"
            )
        self.config = config
        self.weights = weights
        self.network = self._build().compile()
        self._cell_index = np.array(
            [
                [self.network.index.get(self.network.representative[_cell_node(i, j)], -1)
                 for j in range(config.cols)]
                for i in range(config.rows)
            ],
            dtype=int,
        )

    def _build(self) -> Netlist:
        config, rows, cols = self.config, self.config.rows, self.config.cols
        wire = config.wire_res_per_segment
        net = Netlist()
        for i in range(rows):
            net.add_voltage_source(f"drive{i}", f"d{i}", GROUND, 0.0)
            net.add_resistor(f"d{i}", f"a{i}", config.driver_resistance)
            previous = f"a{i}"
            for j in range(cols):
                net.add_resistor(previous, _row_node(i, j), wire)
                previous = _row_node(i, j)
                net.add_resistor(_row_node(i, j), _cell_node(i, j), config.selector_on_resistance)
                net.add_resistor(_cell_node(i, j), _col_node(i, j), self.weights.resistance(i, j))
        for j in range(cols):
            for i in range(rows - 1):
                net.add_resistor(_col_node(i, j), _col_node(i + 1, j), wire)
            net.add_resistor(_col_node(rows - 1, j), f"s{j}", wire)
            net.add_voltage_source(f"sense{j}", f"s{j}", GROUND, 0.0)
        return net

    def _rhs(self, row_voltages: np.ndarray, faults: Sequence[FaultEvent]) -> np.ndarray:
        injections = np.zeros(self.network.n)
        for fault in faults:
            k = self._cell_index[fault.target]
            # An injection node merged into ground absorbs the whole photocurrent.
            if k >= 0:
                injections[k] += fault.injected_current
        sources = np.concatenate([row_voltages, np.zeros(self.config.cols)])
        return self.network.rhs(injections, sources)

    def solve(
        self,
        row_voltages: Sequence[float],
        faults: Sequence[FaultEvent] = (),
        label: str = "mna",
    ) -> MnaSolution:
        voltages = check_row_voltages(self.config, row_voltages)
        check_faults(self.config, faults)
        z = self._rhs(voltages, faults)
        x = self.network.solve(z)
        currents = x[self.network.n + self.config.rows :]
        residual = self.network.kcl_residual(x, z)
        logger.debug(f"MNA solve with {len(faults)} fault(s), KCL residual {residual:.3e}")
        return MnaSolution(
            node_voltages=self.network.node_voltages(x),
            readout=ColumnReadout(currents, label=label),
            kcl_residual=residual,
        )

    def column_currents(
        self, row_voltages: Sequence[float], faults: Sequence[FaultEvent] = ()
    ) -> ColumnReadout:
        """Readout only, without collecting node voltages."""
        voltages = check_row_voltages(self.config, row_voltages)
        check_faults(self.config, faults)
        x = self.network.solve(self._rhs(voltages, faults))
        return ColumnReadout(x[self.network.n + self.config.rows :], label="mna")


def mna_solve(
    config: CrossbarConfig,
    weights: WeightGrid,
    row_voltages: Sequence[float],
    faults: Sequence[FaultEvent] = (),
) -> MnaSolution:
    """One-shot nodal-analysis solve of the full resistive crossbar."""
    return CrossbarNetwork(config, weights).solve(row_voltages, faults)
