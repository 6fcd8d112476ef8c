"""Path enumeration, the auto-oscillation conditions, sensor readout and sweeps.

A path resonates when two conditions hold at once:

* phase: the output phase shifter plus the phase accumulated along the path is
  a whole number of turns, to within the circuit's ``phase_tolerance``;
* gain: the amplifier gain, net of the output attenuator, covers the path's
  propagation loss, which is one A0 per cell pitch travelled.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .circuit import (
    INPUT,
    OUTPUT,
    CircuitError,
    Mesh,
    Path,
    PhaseAngle,
    RingCircuit,
    TwoPathChain,
    cell_position,
    path_length_l0,
    wrapped_sum,
)


def phase_matched(total_phase: float, psi: float, tolerance: float) -> bool:
    return PhaseAngle(float(psi) + float(total_phase)).distance() <= tolerance


def gain_sufficient(gain: float, attenuation: float, length_l0: float) -> bool:
    return gain - attenuation >= length_l0


@lru_cache(maxsize=4096)
def _walks(n: int, adjacency: str, start: tuple[int, int], end: tuple[int, int], monotone: bool):
    """All simple cell walks from ``start`` to ``end`` as tuples of (row, col)."""
    steps = [(0, 1), (1, 0), (0, -1), (-1, 0)]
    if adjacency == "king":
        steps += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    if monotone:
        dr = (end[0] > start[0]) - (end[0] < start[0])
        steps = [(a, b) for a, b in steps if b >= 0 and a in (0, dr) and (a, b) != (0, 0)]
    found = []
    visited = {start}
    trail = [start]

    def extend(cell):
        if cell == end:
            found.append(tuple(trail))
            return
        r, c = cell
        for a, b in steps:
            nxt = (r + a, c + b)
            if 0 <= nxt[0] < n and 0 <= nxt[1] < n and nxt not in visited:
                visited.add(nxt)
                trail.append(nxt)
                extend(nxt)
                trail.pop()
                visited.discard(nxt)

    extend(start)
    return tuple(found)


def enumerate_paths(
    circuit: RingCircuit, input_row: int, output_row: int, monotone: bool = False
) -> list[Path]:
    """Every simple path between two switched-on ports whose filters share a channel.

    With ``monotone=True`` only walks that never step backwards (toward
    column 1) or away from the output row are kept.
    """
    mesh = circuit.mesh
    if not circuit.electric.port(INPUT, input_row).switch:
        raise CircuitError(f"input port {input_row} is switched off")
    if not circuit.electric.port(OUTPUT, output_row).switch:
        raise CircuitError(f"output port {output_row} is switched off")
    start = mesh.position(mesh.input_node(input_row))
    end = mesh.position(mesh.output_node(output_row))
    paths = []
    for walk in _walks(mesh.n, mesh.adjacency, start, end, monotone):
        ids = tuple(mesh.node_at(r, c) for r, c in walk)
        channels = frozenset.intersection(*(mesh.node(i).filter for i in ids))
        if channels:
            paths.append(Path(input_row, ids, output_row, channels))
    paths.sort()
    return paths


@dataclass(frozen=True)
class ResonantPath:
    path: Path
    total_phase: PhaseAngle
    required_gain: float
    channel: int

    @property
    def length_l0(self) -> int:
        return path_length_l0(self.path)


def find_resonant_paths(circuit: RingCircuit) -> list[ResonantPath]:
    """All paths meeting both oscillation conditions, ordered by (input, output, node ids).

    An empty list means the circuit does not auto-oscillate.
    """
    circuit.check_runnable()
    mesh = circuit.mesh
    gain = circuit.electric.gain
    found = []
    for inp in circuit.electric.active(INPUT):
        for out in circuit.electric.active(OUTPUT):
            for path in enumerate_paths(circuit, inp.row, out.row):
                length = path_length_l0(path)
                if not gain_sufficient(gain, out.attenuation, length):
                    continue
                total = wrapped_sum(mesh.node(i).delta for i in path.node_ids)
                if phase_matched(total, out.psi, circuit.phase_tolerance):
                    found.append(ResonantPath(path, total, float(length), path.channel))
    found.sort(key=lambda rp: (rp.path.output_port, rp.path.input_port, rp.path.node_ids))
    return found


@dataclass(frozen=True)
class SensorGrid:
    """Boolean power-sensor readouts, one per delay line, indexed by node id."""

    n: int
    bits: tuple[bool, ...]
    numbering: str = "row"

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))
        if len(self.bits) != self.n * self.n:
            raise CircuitError("sensor grid size mismatch")

    @classmethod
    def from_paths(cls, mesh: Mesh, paths: Iterable[Path]) -> "SensorGrid":
        lit = set()
        for p in paths:
            lit.update(p.node_ids)
        return cls(mesh.n, tuple(i in lit for i in range(1, mesh.n * mesh.n + 1)), mesh.numbering)

    @property
    def active_nodes(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, b in enumerate(self.bits) if b)

    def count(self) -> int:
        return sum(self.bits)

    def to_bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def as_array(self) -> np.ndarray:
        """Readouts laid out by cell position (row 0 at the top)."""
        grid = np.zeros((self.n, self.n), dtype=bool)
        for node_id, bit in enumerate(self.bits, start=1):
            grid[cell_position(self.n, self.numbering, node_id)] = bit
        return grid

    def render(self, on: str = "█", off: str = "·") -> str:
        return "\n".join("".join(on if b else off for b in row) for row in self.as_array())


def sensor_readout(circuit: RingCircuit) -> SensorGrid:
    resonant = find_resonant_paths(circuit)
    return SensorGrid.from_paths(circuit.mesh, (rp.path for rp in resonant))


@dataclass(frozen=True)
class AmplitudeTrace:
    magnitudes: np.ndarray
    rounds: int
    p_sat: float
    seed: float

    @property
    def plateau(self) -> float:
        return float(self.magnitudes[-1])


def simulate_rounds(
    round_gain: float,
    detuning: float,
    rounds: int,
    p_sat: float = 1.0,
    seed: float | None = None,
) -> AmplitudeTrace:
    """Round-by-round amplitude of one frequency circulating in the ring.

    Each round the circulating amplitude is amplified by ``round_gain``,
    rotated by the phase mismatch ``detuning``, topped up by a small seed
    (the thermal background) and passed through a soft saturation
    ``x / sqrt(1 + |x|^2 / p_sat)``.  The returned trace has ``rounds + 1``
    magnitudes, starting from the seed.
    """
    for name, value in (("round_gain", round_gain), ("detuning", detuning), ("p_sat", p_sat)):
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if p_sat <= 0:
        raise ValueError("p_sat must be > 0")
    if round_gain < 0:
        raise ValueError("round_gain must be >= 0")
    c_seed = 1e-3 * math.sqrt(p_sat) if seed is None else float(seed)
    rot = round_gain * complex(math.cos(detuning), math.sin(detuning))
    c = complex(c_seed)
    out = np.empty(rounds + 1)
    out[0] = abs(c)
    for k in range(1, rounds + 1):
        x = rot * c + c_seed
        c = x / math.sqrt(1.0 + abs(x) ** 2 / p_sat)
        out[k] = abs(c)
    return AmplitudeTrace(out, rounds, p_sat, c_seed)


@dataclass(frozen=True)
class SweepRecord:
    value: float
    resonant: tuple[ResonantPath, ...]
    sensors: SensorGrid

    @property
    def count(self) -> int:
        return len(self.resonant)


@dataclass(frozen=True)
class SweepReport:
    """One engine evaluation per grid value of a swept parameter.

    Phase values are stored in units of pi, gains in A0.
    """

    parameter: str
    unit: str
    records: tuple[SweepRecord, ...]

    def __post_init__(self):
        values = [r.value for r in self.records]
        if not values:
            raise ValueError("sweep report needs at least one grid point")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep grid must be strictly increasing")

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.records]

    @property
    def counts(self) -> list[int]:
        return [r.count for r in self.records]

    def record_at(self, value: float, tol: float = 1e-9) -> SweepRecord:
        for r in self.records:
            if abs(r.value - value) <= tol:
                return r
        raise KeyError(value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["param_value", "path_count", "sensor_bits"])
        for r in self.records:
            writer.writerow([_fmt(r.value), r.count, r.sensors.to_bitstring()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "unit": self.unit,
            "records": [
                {
                    "param_value": round(r.value, 12),
                    "path_count": r.count,
                    "sensor_bits": r.sensors.to_bitstring(),
                    "paths": [resonant_path_dict(rp) for rp in r.resonant],
                }
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def resonant_path_dict(rp: ResonantPath) -> dict:
    return {
        "input_port": rp.path.input_port,
        "output_port": rp.path.output_port,
        "node_ids": list(rp.path.node_ids),
        "length_l0": rp.length_l0,
        "total_phase_pi": round(rp.total_phase.pi_units, 12),
        "required_gain_A0": rp.required_gain,
        "channel": rp.channel,
    }


def _fmt(x: float) -> str:
    return format(round(x, 12), ".12g")


def phase_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid in radians; ``stop`` is kept when it lies on the grid."""
    if not step > 0:
        raise ValueError("step must be > 0")
    count = math.floor((stop - start) / step + 1e-9) + 1
    if count < 1:
        raise ValueError("empty sweep grid")
    return [start + k * step for k in range(count)]


def sweep_phase(circuit: RingCircuit, start: float, stop: float, step: float) -> SweepReport:
    """Set every output phase shifter to each grid value in turn (radians in, pi units out)."""
    records = []
    for psi in phase_grid(float(start), float(stop), float(step)):
        c = circuit.with_psi(psi)
        resonant = tuple(find_resonant_paths(c))
        records.append(
            SweepRecord(psi / math.pi, resonant, SensorGrid.from_paths(c.mesh, (rp.path for rp in resonant)))
        )
    return SweepReport("psi", "pi rad", tuple(records))


def sweep_gain(circuit: RingCircuit, levels: Sequence[float]) -> SweepReport:
    """Evaluate the circuit at each amplification level; the report is ordered by gain."""
    levels = list(levels)
    if not levels:
        raise ValueError("levels must be non-empty")
    if any(g < 0 for g in levels):
        raise ValueError("gain levels must be >= 0")
    records = []
    for g in sorted(set(float(x) for x in levels)):
        c = circuit.with_gain(g)
        resonant = tuple(find_resonant_paths(c))
        records.append(SweepRecord(g, resonant, SensorGrid.from_paths(c.mesh, (rp.path for rp in resonant))))
    return SweepReport("gain", "A0", tuple(records))


@dataclass(frozen=True)
class ResonantRoute:
    route: tuple[int, ...]
    total_phase: PhaseAngle
    required_gain: float
    channel: int


def chain_routes(chain: TwoPathChain) -> list[tuple[int, ...]]:
    return list(product((0, 1), repeat=chain.blocks))


def find_resonant_routes(chain: TwoPathChain) -> list[ResonantRoute]:
    """Resonant routes of a two-path chain, under the same two conditions as a mesh."""
    found = []
    for route in chain_routes(chain):
        channels = chain.route_channels(route)
        if not channels:
            continue
        length = chain.route_length_l0(route)
        if not gain_sufficient(chain.gain, 0.0, length):
            continue
        total = chain.route_phase(route)
        if phase_matched(total, chain.psi, chain.phase_tolerance):
            found.append(ResonantRoute(route, total, float(length), min(channels)))
    return found


def chain_sensors(chain: TwoPathChain, routes: Iterable[Sequence[int]]) -> np.ndarray:
    """Sensor readouts of a chain as a (2, blocks) array: row 0 upper lines, row 1 lower."""
    grid = np.zeros((2, chain.blocks), dtype=bool)
    for route in routes:
        for i, choice in enumerate(route):
            grid[choice, i] = True
    return grid

