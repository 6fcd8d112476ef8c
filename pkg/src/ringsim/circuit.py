"""Device data model: the passive delay-line mesh and the electric loop around it.

Node ids are 1-based labels. Two labelings are supported:

``"row"``
    row-major from the top-left cell (node 1 top-left, node n*n bottom-right).
``"column"``
    column-major counted upward from the bottom-left cell, so node 1 is the
    bottom-left cell, node n the top-left cell and the rows read
    ``1, n+1, 2n+1, ...`` from the bottom.  The built-in 3x3 problem fixtures
    use this layout.

Ports are always addressed by grid row, counted from the top (row 1 is the
top row).  Input ports attach to column 1, output ports to column n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

TWO_PI = 2.0 * math.pi

ROOK = "rook"
KING = "king"
ADJACENCIES = (ROOK, KING)
NUMBERINGS = ("row", "column")


class CircuitError(ValueError):
    """Raised when a circuit, mesh or path violates the device model."""


class PhaseAngle(float):
    """A phase in radians, always normalized to ``[0, 2*pi)``.

    Addition and subtraction wrap modulo 2*pi; multiplication by scalars is
    deliberately not overloaded (it returns a plain float).
    """

    def __new__(cls, value: float = 0.0) -> "PhaseAngle":
        value = float(value)
        if not math.isfinite(value):
            raise CircuitError(f"phase must be finite, got {value!r}")
        wrapped = value % TWO_PI
        # x % 2pi can round up to exactly 2pi for tiny negative x
        if wrapped >= TWO_PI:
            wrapped = 0.0
        return super().__new__(cls, wrapped)

    @classmethod
    def from_pi(cls, units: float) -> "PhaseAngle":
        return cls(units * math.pi)

    @property
    def pi_units(self) -> float:
        return float(self) / math.pi

    def __add__(self, other: float) -> "PhaseAngle":
        return PhaseAngle(float(self) + float(other))

    __radd__ = __add__

    def __sub__(self, other: float) -> "PhaseAngle":
        return PhaseAngle(float(self) - float(other))

    def __rsub__(self, other: float) -> "PhaseAngle":
        return PhaseAngle(float(other) - float(self))

    def __neg__(self) -> "PhaseAngle":
        return PhaseAngle(-float(self))

    def distance(self, other: float = 0.0) -> float:
        """Shortest angular distance to ``other`` on the circle, in ``[0, pi]``."""
        d = (float(self) - float(other)) % TWO_PI
        return min(d, TWO_PI - d)

    def __repr__(self) -> str:
        return f"PhaseAngle({self.pi_units:.6g}*pi)"


def wrapped_sum(phases: Iterable[float]) -> PhaseAngle:
    return PhaseAngle(math.fsum(float(p) for p in phases))


def cell_position(n: int, numbering: str, node_id: int) -> tuple[int, int]:
    if not 1 <= node_id <= n * n:
        raise CircuitError(f"node id {node_id} outside 1..{n * n}")
    k = node_id - 1
    if numbering == "row":
        return divmod(k, n)
    col, up = divmod(k, n)
    return n - 1 - up, col


def cell_node(n: int, numbering: str, row: int, col: int) -> int:
    if not (0 <= row < n and 0 <= col < n):
        raise CircuitError(f"cell ({row}, {col}) outside the mesh")
    if numbering == "row":
        return row * n + col + 1
    return col * n + (n - 1 - row) + 1


@dataclass(frozen=True)
class FrequencyChannel:
    id: int
    ghz: float | None = None

    def __post_init__(self):
        if self.ghz is not None and not self.ghz > 0:
            raise CircuitError(f"channel f{self.id}: frequency must be positive")


@dataclass(frozen=True)
class MeshNode:
    """One delay line: its phase shift and the channels its bandpass filter admits."""

    id: int
    delta: PhaseAngle
    filter: frozenset[int]

    def __post_init__(self):
        if not isinstance(self.delta, PhaseAngle):
            object.__setattr__(self, "delta", PhaseAngle(self.delta))
        object.__setattr__(self, "filter", frozenset(self.filter))
        if not self.filter:
            raise CircuitError(f"node {self.id}: empty filter set")


@dataclass(frozen=True)
class Mesh:
    n: int
    nodes: tuple[MeshNode, ...]
    adjacency: str = ROOK
    numbering: str = "row"
    cell_pitch: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError(f"mesh side must be >= 1, got {self.n}")
        if self.adjacency not in ADJACENCIES:
            raise CircuitError(f"unknown adjacency {self.adjacency!r}")
        if self.numbering not in NUMBERINGS:
            raise CircuitError(f"unknown numbering {self.numbering!r}")
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) != self.n * self.n:
            raise CircuitError(f"{self.n}x{self.n} mesh needs {self.n * self.n} nodes, got {len(self.nodes)}")
        ids = [node.id for node in self.nodes]
        if ids != list(range(1, self.n * self.n + 1)):
            raise CircuitError("nodes must be listed in id order 1..n*n")

    def node(self, node_id: int) -> MeshNode:
        if not 1 <= node_id <= self.n * self.n:
            raise CircuitError(f"node id {node_id} outside 1..{self.n * self.n}")
        return self.nodes[node_id - 1]

    def position(self, node_id: int) -> tuple[int, int]:
        """Zero-based (row, column) of a node, row 0 at the top."""
        return cell_position(self.n, self.numbering, node_id)

    def node_at(self, row: int, col: int) -> int:
        return cell_node(self.n, self.numbering, row, col)

    @cached_property
    def _neighbors(self) -> dict[int, tuple[int, ...]]:
        steps = [(0, 1), (1, 0), (0, -1), (-1, 0)]
        if self.adjacency == KING:
            steps += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        table = {}
        for node_id in range(1, self.n * self.n + 1):
            r, c = self.position(node_id)
            nbrs = [
                self.node_at(r + dr, c + dc)
                for dr, dc in steps
                if 0 <= r + dr < self.n and 0 <= c + dc < self.n
            ]
            table[node_id] = tuple(sorted(nbrs))
        return table

    def neighbors(self, node_id: int) -> tuple[int, ...]:
        self.position(node_id)
        return self._neighbors[node_id]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.neighbors(a)

    def input_node(self, row: int) -> int:
        """Node attached to input port ``row`` (1-based, counted from the top)."""
        return self.node_at(row - 1, 0)

    def output_node(self, row: int) -> int:
        return self.node_at(row - 1, self.n - 1)


def build_mesh(
    n: int,
    adjacency: str = ROOK,
    deltas: Sequence[float] | None = None,
    filters: Sequence[Iterable[int]] | None = None,
    numbering: str = "row",
    cell_pitch: float = 1.0,
) -> Mesh:
    """Build a validated n x n mesh.

    ``deltas`` (radians, wrapped) and ``filters`` are indexed by node id - 1.
    Missing ``deltas`` default to zero phase, missing ``filters`` to ``{1}``.
    """
    size = n * n
    deltas = [0.0] * size if deltas is None else list(deltas)
    filters = [{1}] * size if filters is None else list(filters)
    if len(deltas) != size or len(filters) != size:
        raise CircuitError(
            f"{n}x{n} mesh needs {size} deltas and filters, got {len(deltas)} and {len(filters)}"
        )
    nodes = tuple(
        MeshNode(i + 1, PhaseAngle(d), frozenset(f)) for i, (d, f) in enumerate(zip(deltas, filters))
    )
    return Mesh(n, nodes, adjacency, numbering, cell_pitch)


INPUT = "input"
OUTPUT = "output"


@dataclass(frozen=True)
class PortConfig:
    side: str
    row: int
    switch: bool = True
    psi: PhaseAngle | None = None
    attenuation: float | None = None

    def __post_init__(self):
        if self.side not in (INPUT, OUTPUT):
            raise CircuitError(f"port side must be 'input' or 'output', got {self.side!r}")
        if self.side == INPUT:
            if self.psi is not None or self.attenuation is not None:
                raise CircuitError(f"input port {self.row} cannot carry a phase shifter or attenuator")
        else:
            psi = PhaseAngle(0.0 if self.psi is None else self.psi)
            object.__setattr__(self, "psi", psi)
            att = 0.0 if self.attenuation is None else float(self.attenuation)
            if att < 0 or not math.isfinite(att):
                raise CircuitError(f"output port {self.row}: attenuation must be >= 0")
            object.__setattr__(self, "attenuation", att)


@dataclass(frozen=True)
class ElectricPart:
    """Amplifier gain in A0 units (A0 * l0 = 1) plus the 2n port settings."""

    gain: float
    ports: tuple[PortConfig, ...]

    def __post_init__(self):
        if not self.gain >= 0 or not math.isfinite(self.gain):
            raise CircuitError(f"gain must be a finite value >= 0, got {self.gain!r}")
        ports = tuple(sorted(self.ports, key=lambda p: (p.side != INPUT, p.row)))
        keys = [(p.side, p.row) for p in ports]
        if len(set(keys)) != len(keys):
            raise CircuitError("duplicate port entries")
        object.__setattr__(self, "ports", ports)

    def port(self, side: str, row: int) -> PortConfig:
        for p in self.ports:
            if p.side == side and p.row == row:
                return p
        raise CircuitError(f"no {side} port at row {row}")

    def active(self, side: str) -> list[PortConfig]:
        return [p for p in self.ports if p.side == side and p.switch]


def default_ports(
    n: int,
    inputs: Iterable[int] = (1,),
    outputs: Iterable[int] | None = None,
    psi: float | dict[int, float] = 0.0,
) -> tuple[PortConfig, ...]:
    """All 2n ports; only the listed rows are switched on.

    ``psi`` is one phase for every output or a ``{row: phase}`` mapping.
    """
    inputs = set(inputs)
    outputs = set(range(1, n + 1)) if outputs is None else set(outputs)
    ports = [PortConfig(INPUT, r, r in inputs) for r in range(1, n + 1)]
    for r in range(1, n + 1):
        p = psi.get(r, 0.0) if isinstance(psi, dict) else psi
        ports.append(PortConfig(OUTPUT, r, r in outputs, PhaseAngle(p), 0.0))
    return tuple(ports)


DEFAULT_TOLERANCE = 0.01


@dataclass(frozen=True)
class RingCircuit:
    mesh: Mesh
    electric: ElectricPart
    phase_tolerance: float = DEFAULT_TOLERANCE
    power_threshold: float = 1.0

    def __post_init__(self):
        if not 0 < self.phase_tolerance < 0.05 * math.pi:
            raise CircuitError(
                f"phase_tolerance must lie in (0, 0.05*pi), got {self.phase_tolerance!r}"
            )
        rows = {(p.side, p.row) for p in self.electric.ports}
        for side, row in rows:
            if not 1 <= row <= self.mesh.n:
                raise CircuitError(f"{side} port row {row} outside 1..{self.mesh.n}")

    @property
    def n(self) -> int:
        return self.mesh.n

    def check_runnable(self) -> None:
        if not self.electric.active(INPUT) or not self.electric.active(OUTPUT):
            raise CircuitError("at least one input and one output port must be switched on")

    def with_gain(self, gain: float) -> "RingCircuit":
        return replace(self, electric=replace(self.electric, gain=gain))

    def with_psi(self, psi: float | dict[int, float]) -> "RingCircuit":
        """Copy with output phase shifters reset (one value for all, or per row)."""
        ports = []
        for p in self.electric.ports:
            if p.side == OUTPUT:
                value = psi.get(p.row, p.psi) if isinstance(psi, dict) else psi
                p = replace(p, psi=PhaseAngle(value))
            ports.append(p)
        return replace(self, electric=replace(self.electric, ports=tuple(ports)))

    def with_ports(self, inputs: Iterable[int], outputs: Iterable[int]) -> "RingCircuit":
        inputs, outputs = set(inputs), set(outputs)
        ports = tuple(
            replace(p, switch=p.row in (inputs if p.side == INPUT else outputs))
            for p in self.electric.ports
        )
        return replace(self, electric=replace(self.electric, ports=ports))


@dataclass(frozen=True, order=True)
class Path:
    """A simple walk from an input port, through the mesh, to an output port."""

    input_port: int
    node_ids: tuple[int, ...]
    output_port: int
    channels: frozenset[int] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        object.__setattr__(self, "channels", frozenset(self.channels))

    @property
    def channel(self) -> int | None:
        return min(self.channels) if self.channels else None


def validate_path(mesh: Mesh, path: Path) -> None:
    ids = path.node_ids
    if not ids:
        raise CircuitError("path has no nodes")
    for node_id in ids:
        mesh.position(node_id)
    if len(set(ids)) != len(ids):
        raise CircuitError(f"path {ids} revisits a node")
    for a, b in zip(ids, ids[1:]):
        if not mesh.adjacent(a, b):
            raise CircuitError(f"path {ids}: nodes {a} and {b} are not adjacent")
    if ids[0] != mesh.input_node(path.input_port):
        raise CircuitError(f"path {ids} does not start at input port {path.input_port}")
    if ids[-1] != mesh.output_node(path.output_port):
        raise CircuitError(f"path {ids} does not end at output port {path.output_port}")


def accumulated_phase(mesh: Mesh, path: Path) -> PhaseAngle:
    validate_path(mesh, path)
    return wrapped_sum(mesh.node(i).delta for i in path.node_ids)


def path_length_l0(path: Path) -> int:
    """Propagation distance in cell pitches: one per node plus the two port links, minus one."""
    return len(path.node_ids) + 1


@dataclass(frozen=True)
class TwoPathChain:
    """A cascade of two-path blocks between one input and one output.

    Each block offers an upper and a lower delay line, each behind its own
    bandpass filter.  A route picks one line per block; ``route[i]`` is 0 for
    the upper line of block i and 1 for the lower one.
    """

    upper: tuple[PhaseAngle, ...]
    lower: tuple[PhaseAngle, ...]
    upper_filters: tuple[frozenset[int], ...]
    lower_filters: tuple[frozenset[int], ...]
    gain: float
    psi: PhaseAngle = PhaseAngle(0.0)
    phase_tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        k = len(self.upper)
        if k < 1:
            raise CircuitError("a chain needs at least one block")
        if not (len(self.lower) == len(self.upper_filters) == len(self.lower_filters) == k):
            raise CircuitError("chain blocks are inconsistent")
        object.__setattr__(self, "upper", tuple(PhaseAngle(d) for d in self.upper))
        object.__setattr__(self, "lower", tuple(PhaseAngle(d) for d in self.lower))
        object.__setattr__(self, "upper_filters", tuple(frozenset(f) for f in self.upper_filters))
        object.__setattr__(self, "lower_filters", tuple(frozenset(f) for f in self.lower_filters))
        if any(not f for f in self.upper_filters + self.lower_filters):
            raise CircuitError("chain filter sets must be non-empty")
        object.__setattr__(self, "psi", PhaseAngle(self.psi))
        if not self.gain >= 0:
            raise CircuitError("gain must be >= 0")
        if not 0 < self.phase_tolerance < 0.05 * math.pi:
            raise CircuitError("phase_tolerance must lie in (0, 0.05*pi)")

    @property
    def blocks(self) -> int:
        return len(self.upper)

    def route_phase(self, route: Sequence[int]) -> PhaseAngle:
        return wrapped_sum((self.upper, self.lower)[choice][i] for i, choice in enumerate(route))

    def route_channels(self, route: Sequence[int]) -> frozenset[int]:
        sets = [(self.upper_filters, self.lower_filters)[choice][i] for i, choice in enumerate(route)]
        return frozenset.intersection(*sets)

    def route_length_l0(self, route: Sequence[int]) -> int:
        return len(route) + 1

    def with_psi(self, psi: float) -> "TwoPathChain":
        return replace(self, psi=PhaseAngle(psi))

    def with_gain(self, gain: float) -> "TwoPathChain":
        return replace(self, gain=gain)


def two_path_chain(
    upper: Sequence[float],
    lower: Sequence[float] | None = None,
    gain: float | None = None,
    psi: float = 0.0,
    phase_tolerance: float = DEFAULT_TOLERANCE,
) -> TwoPathChain:
    """Chain with one frequency channel per route.

    Channel ``1 + m`` is the route whose bitmask ``m`` has bit i set when block
    i takes its lower line, so channel 1 runs through all upper lines and the
    last channel through all lower lines.  Gain defaults to the route length,
    enough to sustain every route.
    """
    k = len(upper)
    lower = [0.0] * k if lower is None else list(lower)
    everything = range(2**k)
    upper_f = [frozenset(1 + m for m in everything if not m >> i & 1) for i in range(k)]
    lower_f = [frozenset(1 + m for m in everything if m >> i & 1) for i in range(k)]
    return TwoPathChain(
        tuple(upper), tuple(lower), tuple(upper_f), tuple(lower_f),
        gain=float(k + 1) if gain is None else gain,
        psi=PhaseAngle(psi), phase_tolerance=phase_tolerance,
    )
