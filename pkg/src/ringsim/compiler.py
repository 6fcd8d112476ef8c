"""Problem compilers: build circuits for concrete tasks and decode their readouts."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import networkx as nx
import numpy as np

from .circuit import (
    DEFAULT_TOLERANCE,
    OUTPUT,
    TWO_PI,
    CircuitError,
    ElectricPart,
    Mesh,
    Path,
    PhaseAngle,
    RingCircuit,
    TwoPathChain,
    build_mesh,
    default_ports,
    two_path_chain,
    wrapped_sum,
)
from .engine import ResonantPath, ResonantRoute, chain_sensors, find_resonant_routes, sweep_gain

log = logging.getLogger(__name__)

DEFAULT_PRIMES = (3, 5, 7, 11, 13)


def log_phase(x: float) -> PhaseAngle:
    """pi * log10(x), wrapped."""
    return PhaseAngle(math.pi * math.log10(x))


@dataclass(frozen=True)
class FactorizationDevice:
    """Chain of two-path blocks; block i's upper line carries pi*log10(primes[i])."""

    primes: tuple[int, ...]
    chain: TwoPathChain

    def factors_of(self, route: Sequence[int]) -> frozenset[int]:
        return frozenset(p for p, choice in zip(self.primes, route) if choice == 0)


def build_factorization_device(
    primes: Iterable[int] = DEFAULT_PRIMES, phase_tolerance: float = DEFAULT_TOLERANCE
) -> FactorizationDevice:
    primes = tuple(int(p) for p in primes)
    if not primes:
        raise ValueError("need at least one prime")
    if len(set(primes)) != len(primes):
        raise ValueError(f"primes must be distinct, got {primes}")
    if any(p < 2 for p in primes):
        raise ValueError("primes must be >= 2")
    chain = two_path_chain(
        [math.pi * math.log10(p) for p in primes], phase_tolerance=phase_tolerance
    )
    return FactorizationDevice(primes, chain)


@dataclass(frozen=True)
class FactorizationResult:
    n: int
    psi: PhaseAngle
    resonant: tuple[ResonantRoute, ...]
    factors: frozenset[int] | None
    # phase-resonant routes whose prime product is not n (mod 2*pi wrap aliases)
    aliases: tuple[ResonantRoute, ...] = ()
    sensors: np.ndarray = field(default=None, compare=False, repr=False)


def factorize_detail(device: FactorizationDevice, n: int) -> FactorizationResult:
    if n < 2:
        raise ValueError("N must be >= 2")
    psi = PhaseAngle(TWO_PI - math.pi * math.log10(n))
    chain = device.chain.with_psi(psi)
    resonant = tuple(find_resonant_routes(chain))
    exact = [r for r in resonant if math.prod(device.factors_of(r.route)) == n]
    aliases = tuple(r for r in resonant if r not in exact)
    if aliases:
        log.debug("N=%d: %d phase-aliased route(s) rejected", n, len(aliases))
    factors = device.factors_of(exact[0].route) if exact else None
    sensors = chain_sensors(chain, [r.route for r in exact])
    return FactorizationResult(n, psi, resonant, factors, aliases, sensors)


def factorize(device: FactorizationDevice, n: int) -> frozenset[int] | None:
    """Prime factors of ``n`` among the device primes, or None if the device stays silent.

    The external phase is set to ``2*pi - pi*log10(n)``; a route resonates when
    its upper-line phases add up to ``pi*log10(n)`` modulo 2*pi.  The decoded
    factor set is kept only if its product is exactly ``n``.
    """
    return factorize_detail(device, n).factors


PHASE_MATCH = "phase-match"
SHORTEST = "shortest"
SHORTEST_VIA = "shortest-via-nodes"
OBJECTIVES = (PHASE_MATCH, SHORTEST, SHORTEST_VIA)


@dataclass(frozen=True)
class MeshProblem:
    circuit: RingCircuit
    objective: str = PHASE_MATCH
    via_nodes: frozenset[int] = frozenset()
    gain_levels: tuple[float, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise CircuitError(f"unknown objective {self.objective!r}")
        object.__setattr__(self, "via_nodes", frozenset(self.via_nodes))
        object.__setattr__(self, "gain_levels", tuple(float(g) for g in self.gain_levels))
        mesh = self.circuit.mesh
        for v in self.via_nodes:
            mesh.node(v)
        if self.objective == SHORTEST_VIA:
            if not self.via_nodes:
                raise CircuitError("shortest-via-nodes needs at least one via node")
            want = via_psi(mesh, self.via_nodes)
            for port in self.circuit.electric.active(OUTPUT):
                if port.psi.distance(want) > self.circuit.phase_tolerance:
                    raise CircuitError(
                        f"output {port.row}: psi {port.psi.pi_units:.4g}pi does not complement "
                        f"the via-node phase sum ({want.pi_units:.4g}pi expected)"
                    )


def via_psi(mesh: Mesh, via_nodes: Iterable[int]) -> PhaseAngle:
    """Output phase that cancels the summed phase of the via nodes."""
    return -wrapped_sum(mesh.node(v).delta for v in via_nodes)


def _fixture_mesh(deltas_pi: dict[int, float], default_pi: float) -> Mesh:
    deltas = [PhaseAngle.from_pi(deltas_pi.get(i, default_pi)) for i in range(1, 10)]
    return build_mesh(3, "rook", deltas, numbering="column")


_PHASE_LADDER = {4: 0.2, 5: 0.4, 6: 0.6}
_VIA_SITES = {2: 0.5, 4: 0.3, 6: 0.7}
FIXTURES = ("example2", "example3", "example4")


def build_mesh_problem(
    fixture: str | RingCircuit,
    objective: str = PHASE_MATCH,
    via_nodes: Iterable[int] = (),
    gain_levels: Sequence[float] = (),
) -> MeshProblem:
    """Build a named 3x3 fixture, or wrap a custom circuit as a problem.

    Fixtures (column-labelled 3x3 meshes, input row 1, uniform filter {1}):

    ``example2``
        delay lines 4, 5, 6 at 0.2, 0.4, 0.6 pi, the rest at 0.1 pi; all three
        outputs on; gain 10 A0; every output phase 1.4 pi.
    ``example3``
        the same mesh with every output phase at 1.2 pi and a gain ladder
        10, 9, ..., 3 A0 to extract the shortest resonant path.
    ``example4``
        delay lines 2, 4, 6 at 0.5, 0.3, 0.7 pi, the rest at 0; only output 3
        on, its phase set to cancel the three via sites (0.5 pi); gain ladder
        10 down to 4 A0.

    For a custom circuit with the ``shortest-via-nodes`` objective, the output
    phases are preset from ``via_nodes``.
    """
    if isinstance(fixture, RingCircuit):
        circuit = fixture
        if objective == SHORTEST_VIA:
            circuit = circuit.with_psi(via_psi(circuit.mesh, via_nodes))
        return MeshProblem(circuit, objective, frozenset(via_nodes), tuple(gain_levels))
    if fixture == "example2":
        mesh = _fixture_mesh(_PHASE_LADDER, 0.1)
        ports = default_ports(3, inputs=(1,), psi=PhaseAngle.from_pi(1.4))
        return MeshProblem(RingCircuit(mesh, ElectricPart(10.0, ports)), PHASE_MATCH, name=fixture)
    if fixture == "example3":
        mesh = _fixture_mesh(_PHASE_LADDER, 0.1)
        ports = default_ports(3, inputs=(1,), psi=PhaseAngle.from_pi(1.2))
        levels = tuple(float(g) for g in range(10, 2, -1))
        return MeshProblem(RingCircuit(mesh, ElectricPart(10.0, ports)), SHORTEST, gain_levels=levels, name=fixture)
    if fixture == "example4":
        mesh = _fixture_mesh(_VIA_SITES, 0.0)
        via = frozenset(_VIA_SITES)
        ports = default_ports(3, inputs=(1,), outputs=(3,), psi=via_psi(mesh, via))
        levels = tuple(float(g) for g in range(10, 3, -1))
        return MeshProblem(
            RingCircuit(mesh, ElectricPart(10.0, ports)), SHORTEST_VIA, via, levels, name=fixture
        )
    raise KeyError(f"unknown fixture {fixture!r}; known: {', '.join(FIXTURES)}")


class ShortestPath(NamedTuple):
    path: ResonantPath
    gain: float
    ties: tuple[ResonantPath, ...] = ()


def solve_shortest(problem: MeshProblem) -> ShortestPath | None:
    """Lower the gain step by step and keep what still oscillates at the lowest level.

    Returns None when nothing resonates at any level, or (for the via-node
    objective) when the surviving path misses a required site.
    """
    if problem.objective not in (SHORTEST, SHORTEST_VIA):
        raise CircuitError(f"objective {problem.objective!r} is not a shortest-path task")
    levels = problem.gain_levels or (problem.circuit.electric.gain,)
    report = sweep_gain(problem.circuit, levels)
    alive = [r for r in report.records if r.count]
    if not alive:
        return None
    lowest = alive[0]
    best, *ties = lowest.resonant
    if problem.objective == SHORTEST_VIA and not problem.via_nodes <= set(best.path.node_ids):
        log.warning(
            "surviving path %s misses via nodes %s", best.path.node_ids, sorted(problem.via_nodes)
        )
        return None
    return ShortestPath(best, lowest.value, tuple(ties))


def assign_channels(paths: Sequence[Path], budget: int, mesh: Mesh | None = None) -> list[int] | None:
    """Greedy channel plan: paths that share a delay line get different channels.

    Returns one 1-based channel per path, or None when the greedy colouring
    needs more than ``budget`` channels.  The colouring is not guaranteed to
    be minimal.
    """
    if budget < 1:
        raise ValueError("channel budget must be >= 1")
    if mesh is not None:
        for p in paths:
            for node_id in p.node_ids:
                mesh.node(node_id)
    conflicts = nx.Graph()
    conflicts.add_nodes_from(range(len(paths)))
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if set(paths[i].node_ids) & set(paths[j].node_ids):
                conflicts.add_edge(i, j)
    colours = nx.greedy_color(conflicts, strategy="largest_first")
    plan = [colours[i] + 1 for i in range(len(paths))]
    if plan and max(plan) > budget:
        return None
    return plan
