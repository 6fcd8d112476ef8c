"""Command-line front end.

Exit status: 0 when the device oscillates (a path or factorization was
found), 1 when it stays silent, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path as FsPath

from . import __version__
from .circuit import CircuitError, RingCircuit
from .combinatorics import functional_throughput
from .compiler import (
    FIXTURES,
    SHORTEST,
    SHORTEST_VIA,
    MeshProblem,
    build_factorization_device,
    build_mesh_problem,
    factorize_detail,
    solve_shortest,
)
from .dispersion import MSSW, OutOfBandError, SpinWaveMedium, dispersion_table
from .engine import SweepReport, find_resonant_paths, resonant_path_dict, sensor_readout, sweep_gain, sweep_phase
from .files import CircuitFileError, load_circuit_file

EXIT_OK, EXIT_SILENT, EXIT_ERROR = 0, 1, 2


@dataclass
class RunManifest:
    command: str
    source: str | None = None
    overrides: dict = field(default_factory=dict)
    out_dir: str | None = None
    version: str = __version__
    seed: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def parse_phase(text: str) -> float:
    """Phase in radians from ``"0.1pi"``, ``"2pi"``, ``"pi"`` or a bare number of pi units."""
    s = text.strip().lower()
    if s.endswith("pi"):
        s = s[:-2].strip() or "1"
    try:
        return float(s) * math.pi
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read phase {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", choices=FIXTURES, help="built-in 3x3 problem")
    src.add_argument("--circuit", metavar="FILE", help="circuit description file (JSON)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="DIR", help="write reports and a run manifest here")
    p.add_argument("--json", action="store_true", help="print JSON instead of CSV/text")
    p.add_argument("--tolerance", type=float, help="phase-match tolerance in radians")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringsim", description="Multi-path active ring circuit simulator.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="factor N over the device primes")
    p.add_argument("number", type=int)
    p.add_argument("--primes", type=_ints, default=[3, 5, 7, 11, 13])
    _add_common(p)

    p = sub.add_parser("solve", help="run a fixture or circuit file")
    _add_source(p)
    p.add_argument("--sweep-phase", action="store_true", help="sweep the output phase instead")
    p.add_argument("--step", type=parse_phase, default=0.1 * math.pi)
    _add_common(p)

    p = sub.add_parser("sweep-phase", help="count resonant paths over an output-phase grid")
    _add_source(p)
    p.add_argument("--start", type=parse_phase, default=0.0)
    p.add_argument("--stop", type=parse_phase, default=2 * math.pi)
    p.add_argument("--step", type=parse_phase, default=0.1 * math.pi)
    _add_common(p)

    p = sub.add_parser("sweep-gain", help="count resonant paths over amplification levels")
    _add_source(p)
    p.add_argument("--levels", type=_floats, help="comma-separated gains in A0 (default: file/fixture ladder)")
    _add_common(p)

    p = sub.add_parser("dispersion", help="tabulate spin-wave dispersion as CSV (k, f)")
    p.add_argument("--circuit", metavar="FILE", help="take the medium from the file's physical section")
    p.add_argument("--d0", type=float, default=9.6e-6, help="film thickness [m]")
    p.add_argument("--m0", type=float, default=1750.0, help="4*pi*M0 [G]")
    p.add_argument("--h0", type=float, default=330.0, help="bias field [Oe]")
    p.add_argument("--gamma", type=float, default=2.8, help="gyromagnetic ratio [MHz/Oe]")
    p.add_argument("--geometry", choices=["MSSW", "BVMSW"], default=MSSW)
    p.add_argument("--kmin", type=float, default=1e2, help="[rad/m]")
    p.add_argument("--kmax", type=float, default=1e6, help="[rad/m]")
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out", metavar="DIR")

    p = sub.add_parser("capacity", help="path counts and functional throughput")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=float, required=True, help="cell pitch [m]")
    p.add_argument("--vg", type=float, required=True, help="group velocity [m/s]")
    p.add_argument("--z", type=int, default=180, help="phases per shifter")
    p.add_argument("--levels", type=int, default=20, help="amplitude levels")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="DIR")

    p = sub.add_parser("validate", help="check a circuit file")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="reject unknown fields")
    return parser


def _load_problem(args) -> tuple[MeshProblem, str]:
    if args.fixture:
        problem, source = build_mesh_problem(args.fixture), args.fixture
    else:
        circuit, problem, _ = load_circuit_file(args.circuit)
        problem = problem or MeshProblem(circuit)
        source = args.circuit
    if getattr(args, "tolerance", None) is not None:
        problem = replace(problem, circuit=replace(problem.circuit, phase_tolerance=args.tolerance))
    return problem, source


class _Bundle:
    def __init__(self, args, source):
        overrides = {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("command", "fixture", "circuit", "out") and v is not None and v is not False
        }
        self.manifest = RunManifest(
            args.command, source, overrides, args.out, seed=os.environ.get("RINGSIM_SEED")
        )
        self.dir = FsPath(args.out) if args.out else None

    def write(self, name: str, text: str) -> None:
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        (self.dir / name).write_text(text, encoding="utf-8")

    def close(self) -> None:
        self.write("manifest.json", self.manifest.to_json())


def _emit_sweep(report: SweepReport, args, bundle: _Bundle, stem: str) -> int:
    csv_text, json_text = report.to_csv(), report.to_json()
    bundle.write(f"{stem}.csv", csv_text)
    bundle.write(f"{stem}.json", json_text)
    if args.out:
        print(f"{stem}: {len(report.records)} grid points, max {max(report.counts)} resonant path(s)")
    else:
        sys.stdout.write(json_text if args.json else csv_text)
    return EXIT_OK if any(report.counts) else EXIT_SILENT


def _print_paths(circuit: RingCircuit, resonant) -> None:
    for rp in resonant:
        p = rp.path
        print(
            f"  in {p.input_port} -> out {p.output_port}: nodes {'-'.join(map(str, p.node_ids))} "
            f"(length {rp.length_l0} l0, phase {rp.total_phase.pi_units:.4g}pi, channel f{rp.channel})"
        )
    grid = sensor_readout(circuit)
    print(grid.render())
    print(grid.to_bitstring())


def cmd_factorize(args) -> int:
    device = build_factorization_device(args.primes, **({"phase_tolerance": args.tolerance} if args.tolerance else {}))
    result = factorize_detail(device, args.number)
    bundle = _Bundle(args, None)
    payload = {
        "N": args.number,
        "primes": list(device.primes),
        "psi_pi": round(result.psi.pi_units, 12),
        "factors": sorted(result.factors) if result.factors else None,
        "routes": [
            {"route": ["upper" if c == 0 else "lower" for c in r.route],
             "phase_pi": round(r.total_phase.pi_units, 12), "channel": r.channel}
            for r in result.resonant
        ],
        "rejected_aliases": len(result.aliases),
        "sensors": {
            "upper": [bool(b) for b in result.sensors[0]],
            "lower": [bool(b) for b in result.sensors[1]],
        },
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    bundle.write("factorization.json", text)
    bundle.close()
    if args.json:
        sys.stdout.write(text)
    elif result.factors:
        print(" × ".join(str(p) for p in sorted(result.factors)))
        for row, label in zip(result.sensors, ("upper", "lower")):
            print(f"  {label}: " + "".join("█" if b else "·" for b in row))
    else:
        print("no factorization over device primes")
    return EXIT_OK if result.factors else EXIT_SILENT


def cmd_solve(args) -> int:
    problem, source = _load_problem(args)
    bundle = _Bundle(args, source)
    try:
        if args.sweep_phase:
            report = sweep_phase(problem.circuit, 0.0, 2 * math.pi, args.step)
            return _emit_sweep(report, args, bundle, "sweep_phase")
        if problem.objective in (SHORTEST, SHORTEST_VIA):
            solution = solve_shortest(problem)
            if problem.gain_levels:
                bundle.write("sweep_gain.csv", sweep_gain(problem.circuit, problem.gain_levels).to_csv())
            payload = {
                "objective": problem.objective,
                "solution": None if solution is None else {
                    "gain_A0": solution.gain,
                    "path": resonant_path_dict(solution.path),
                    "ties": [resonant_path_dict(t) for t in solution.ties],
                },
            }
            bundle.write("solution.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
            if args.json:
                print(json.dumps(payload, indent=2, sort_keys=True))
            elif solution is None:
                print("no resonant path at any gain level")
            else:
                print(f"shortest path at {solution.gain:g} A0:")
                _print_paths(problem.circuit.with_gain(solution.gain), [solution.path])
            return EXIT_OK if solution else EXIT_SILENT
        resonant = find_resonant_paths(problem.circuit)
        payload = {"objective": problem.objective, "paths": [resonant_path_dict(rp) for rp in resonant]}
        bundle.write("solution.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
        if args.json:
            print(json.dumps(payload, indent=2, sort_keys=True))
        elif resonant:
            print(f"{len(resonant)} resonant path(s):")
            _print_paths(problem.circuit, resonant)
        else:
            print("no resonant path")
        return EXIT_OK if resonant else EXIT_SILENT
    finally:
        bundle.close()


def cmd_sweep_phase(args) -> int:
    problem, source = _load_problem(args)
    bundle = _Bundle(args, source)
    try:
        report = sweep_phase(problem.circuit, args.start, args.stop, args.step)
        return _emit_sweep(report, args, bundle, "sweep_phase")
    finally:
        bundle.close()


def cmd_sweep_gain(args) -> int:
    problem, source = _load_problem(args)
    levels = args.levels or problem.gain_levels or [float(g) for g in range(10, 2, -1)]
    bundle = _Bundle(args, source)
    try:
        report = sweep_gain(problem.circuit, levels)
        return _emit_sweep(report, args, bundle, "sweep_gain")
    finally:
        bundle.close()


def cmd_dispersion(args) -> int:
    if args.circuit:
        _, _, medium = load_circuit_file(args.circuit)
        if medium is None:
            raise CircuitFileError(f"{args.circuit}: no physical section")
    else:
        medium = SpinWaveMedium(args.d0, args.m0, args.h0, args.gamma, args.geometry)
    k, f = dispersion_table(medium, args.kmin, args.kmax, args.points)
    lines = ["k_rad_per_m,f_GHz"] + [f"{a:.9g},{b:.12g}" for a, b in zip(k, f)]
    text = "\n".join(lines) + "\n"
    bundle = _Bundle(args, args.circuit)
    bundle.write("dispersion.csv", text)
    bundle.close()
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_capacity(args) -> int:
    report = functional_throughput(args.n, args.l, args.vg, args.z, args.levels)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    bundle = _Bundle(args, None)
    bundle.write("capacity.json", text)
    bundle.close()
    if args.json:
        sys.stdout.write(text)
    else:
        rows = [
            ("n", report.n),
            ("corner paths", report.corner_paths),
            ("total paths", report.total_paths),
            ("instructions", report.instructions),
            ("area [m^2]", f"{report.area_m2:.6g}"),
            ("time [s]", f"{report.time_s:.6g}"),
            ("throughput [ops/(m^2 s)]", f"{report.throughput:.6g}"),
        ]
        width = max(len(name) for name, _ in rows)
        for name, value in rows:
            print(f"{name:<{width}}  {value}")
    return EXIT_OK


def cmd_validate(args) -> int:
    circuit, problem, medium = load_circuit_file(args.file, strict=args.strict)
    extra = f", objective {problem.objective}" if problem else ""
    print(f"{args.file}: ok ({circuit.n}x{circuit.n} {circuit.mesh.adjacency} mesh{extra})")
    return EXIT_OK


COMMANDS = {
    "factorize": cmd_factorize,
    "solve": cmd_solve,
    "sweep-phase": cmd_sweep_phase,
    "sweep-gain": cmd_sweep_gain,
    "dispersion": cmd_dispersion,
    "capacity": cmd_capacity,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (CircuitError, CircuitFileError, OutOfBandError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
