"""Capacity estimates for an n x n device: path counts, instruction counts, throughput.

All counts are exact Python integers; only the throughput is a float.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

DEFAULT_PHASES = 180  # ~2 degree phase-shifter resolution
DEFAULT_LEVELS = 20   # 3 dB steps over a 60 dB range


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def corner_path_count(n: int) -> int:
    """Lattice paths joining the most distant ports: C(2n, n)."""
    _check_n(n)
    return math.comb(2 * n, n)


def total_path_count(n: int) -> int:
    """Port-combination count 2**(2n-2) times the corner path count.

    Treats every port pair as if it had as many paths as the corner pair, so
    it is an estimate of the device's path space, not an exact census.
    """
    _check_n(n)
    return 2 ** (2 * n - 2) * corner_path_count(n)


def instruction_count(n: int, z: int = DEFAULT_PHASES, levels: int = DEFAULT_LEVELS) -> int:
    """Output-switch, phase and attenuation settings: 2**(n-1) * z**n * levels**n."""
    _check_n(n)
    if z < 1 or levels < 1:
        raise ValueError("z and levels must be >= 1")
    return 2 ** (n - 1) * z**n * levels**n


@dataclass(frozen=True)
class CapacityReport:
    n: int
    corner_paths: int
    total_paths: int
    instructions: int
    throughput: float
    area_m2: float
    time_s: float
    notes: str = (
        "total_paths assumes every input/output pair has the corner-pair path count"
    )

    def to_dict(self) -> dict:
        d = asdict(self)
        # big integers are kept exact as decimal strings
        for key in ("corner_paths", "total_paths", "instructions"):
            d[key] = str(d[key])
        return d


def functional_throughput(
    n: int,
    l: float,
    v_g: float,
    z: int = DEFAULT_PHASES,
    levels: int = DEFAULT_LEVELS,
) -> CapacityReport:
    """Operations per unit area per unit time for an n x n mesh of pitch ``l``.

    Area is ``l**2 * n**2`` and the settling time ``l * n**2 / v_g``.
    """
    _check_n(n)
    if not (l > 0 and v_g > 0):
        raise ValueError("l and v_g must be > 0")
    area = l**2 * n**2
    time = l * n**2 / v_g
    total = total_path_count(n)
    try:
        throughput = total / (area * time)
    except OverflowError:
        throughput = math.inf
    return CapacityReport(
        n=n,
        corner_paths=corner_path_count(n),
        total_paths=total,
        instructions=instruction_count(n, z, levels),
        throughput=throughput,
        area_m2=area,
        time_s=time,
    )
