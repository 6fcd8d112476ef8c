"""Circuit description files (JSON) and report bundles.

Phases are written in units of pi.  On load they may be numbers (``0.6``) or
strings (``"0.6pi"``); values outside ``[0, 2)`` are wrapped with a warning.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from importlib import resources
from pathlib import Path as FsPath
from typing import Any

import jsonschema

from .circuit import (
    INPUT,
    OUTPUT,
    CircuitError,
    ElectricPart,
    PhaseAngle,
    PortConfig,
    RingCircuit,
    build_mesh,
)
from .compiler import OBJECTIVES, MeshProblem
from .dispersion import SpinWaveMedium

TOP_LEVEL_KEYS = {
    "n", "adjacency", "numbering", "nodes", "ports", "gain_A0", "phase_tolerance",
    "power_threshold", "problem", "physical",
}

_PHASE = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?[0-9.eE+-]+\s*(pi)?\s*$"}]}

SCHEMA = {
    "type": "object",
    "required": ["n", "nodes", "ports", "gain_A0"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "adjacency": {"enum": ["rook", "king"]},
        "numbering": {"enum": ["row", "column"]},
        "gain_A0": {"type": "number", "minimum": 0},
        "phase_tolerance": {"type": "number", "exclusiveMinimum": 0},
        "power_threshold": {"type": "number", "exclusiveMinimum": 0},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "delta_pi_units", "filter"],
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "delta_pi_units": _PHASE,
                    "filter": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                },
            },
        },
        "ports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["side", "row"],
                "properties": {
                    "side": {"enum": [INPUT, OUTPUT]},
                    "row": {"type": "integer", "minimum": 1},
                    "switch": {"type": "boolean"},
                    "psi_pi_units": _PHASE,
                    "attenuation_A0": {"type": "number", "minimum": 0},
                },
            },
        },
        "problem": {
            "type": "object",
            "properties": {
                "objective": {"enum": list(OBJECTIVES)},
                "via_nodes": {"type": "array", "items": {"type": "integer"}},
                "gain_levels_A0": {"type": "array", "items": {"type": "number", "minimum": 0}},
            },
        },
        "physical": {
            "type": "object",
            "required": ["d0", "M0_4pi"],
            "properties": {
                "d0": {"type": "number"},
                "M0_4pi": {"type": "number"},
                "H0": {"type": "number"},
                "gamma": {"type": "number"},
                "geometry": {"enum": ["MSSW", "BVMSW"]},
            },
        },
    },
}


class CircuitFileError(ValueError):
    """A circuit file failed to parse or validate; the message names the field."""


class PhaseWrapWarning(UserWarning):
    pass


def parse_pi(value: Any, where: str) -> float:
    """Phase in pi units from a number or a string such as ``"0.6pi"``."""
    if isinstance(value, str):
        m = re.fullmatch(r"\s*(-?[0-9.eE+-]+)\s*(pi)?\s*", value)
        if not m:
            raise CircuitFileError(f"{where}: cannot read phase {value!r}")
        value = float(m.group(1))
    value = float(value)
    if not math.isfinite(value):
        raise CircuitFileError(f"{where}: phase must be finite")
    if not 0 <= value < 2:
        wrapped = value % 2.0
        warnings.warn(f"{where}: phase {value:g}pi wrapped to {wrapped:g}pi", PhaseWrapWarning, stacklevel=3)
    return value


def _where(error: jsonschema.ValidationError, doc: dict) -> str:
    parts = []
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else (f".{p}" if parts else str(p)))
    loc = "".join(parts) or "<root>"
    path = list(error.absolute_path)
    if len(path) >= 2 and path[0] == "nodes" and isinstance(path[1], int):
        try:
            loc += f" (node id {doc['nodes'][path[1]]['id']})"
        except (KeyError, IndexError, TypeError):
            pass
    return loc


def circuit_from_dict(doc: dict, strict: bool = False) -> tuple[RingCircuit, MeshProblem | None, SpinWaveMedium | None]:
    if not isinstance(doc, dict):
        raise CircuitFileError("circuit file must hold a JSON object")
    unknown = sorted(set(doc) - TOP_LEVEL_KEYS)
    if unknown:
        if strict:
            raise CircuitFileError(f"unknown field(s): {', '.join(unknown)}")
        warnings.warn(f"ignoring unknown field(s): {', '.join(unknown)}", stacklevel=2)
    errors = sorted(jsonschema.Draft7Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        raise CircuitFileError(f"{_where(first, doc)}: {first.message}")

    n = doc["n"]
    nodes = sorted(doc["nodes"], key=lambda d: d["id"])
    if [d["id"] for d in nodes] != list(range(1, n * n + 1)):
        raise CircuitFileError(f"nodes: expected ids 1..{n * n}, got {[d['id'] for d in nodes]}")
    deltas, filters = [], []
    for i, d in enumerate(nodes):
        if not d["filter"]:
            raise CircuitFileError(f"nodes[{i}] (node id {d['id']}): empty filter set")
        deltas.append(PhaseAngle.from_pi(parse_pi(d["delta_pi_units"], f"node {d['id']} delta")))
        filters.append(set(d["filter"]))

    ports = []
    for i, p in enumerate(doc["ports"]):
        where = f"ports[{i}]"
        if p["side"] == INPUT:
            if "psi_pi_units" in p or "attenuation_A0" in p:
                raise CircuitFileError(f"{where}: input ports carry no phase shifter or attenuator")
            ports.append(PortConfig(INPUT, p["row"], p.get("switch", True)))
        else:
            psi = PhaseAngle.from_pi(parse_pi(p.get("psi_pi_units", 0.0), f"{where} psi"))
            ports.append(PortConfig(OUTPUT, p["row"], p.get("switch", True), psi, p.get("attenuation_A0", 0.0)))

    try:
        mesh = build_mesh(n, doc.get("adjacency", "rook"), deltas, filters, doc.get("numbering", "row"))
        circuit = RingCircuit(
            mesh,
            ElectricPart(float(doc["gain_A0"]), tuple(ports)),
            float(doc.get("phase_tolerance", 0.01)),
            float(doc.get("power_threshold", 1.0)),
        )
        problem = None
        if "problem" in doc:
            section = doc["problem"]
            problem = MeshProblem(
                circuit,
                section.get("objective", "phase-match"),
                frozenset(section.get("via_nodes", ())),
                tuple(section.get("gain_levels_A0", ())),
            )
        medium = SpinWaveMedium(**doc["physical"]) if "physical" in doc else None
    except (CircuitError, ValueError) as exc:
        raise CircuitFileError(str(exc)) from exc
    return circuit, problem, medium


def load_circuit(source, strict: bool = False) -> RingCircuit:
    """Load and validate a circuit file (path or open text file)."""
    return load_circuit_file(source, strict)[0]


def load_circuit_file(source, strict: bool = False):
    """Like :func:`load_circuit` but also returns the optional problem and medium sections."""
    if hasattr(source, "read"):
        text, name = source.read(), getattr(source, "name", "<stream>")
    else:
        text, name = FsPath(source).read_text(encoding="utf-8"), str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFileError(f"{name}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return circuit_from_dict(doc, strict)
    except CircuitFileError as exc:
        raise CircuitFileError(f"{name}: {exc}") from exc


def _pi(x: float) -> float:
    v = round(float(x) / math.pi, 12)
    return 0.0 if v == 2.0 else v


def circuit_to_dict(
    circuit: RingCircuit, problem: MeshProblem | None = None, medium: SpinWaveMedium | None = None
) -> dict:
    mesh = circuit.mesh
    doc: dict[str, Any] = {
        "n": mesh.n,
        "adjacency": mesh.adjacency,
        "numbering": mesh.numbering,
        "nodes": [
            {"id": node.id, "delta_pi_units": _pi(node.delta), "filter": sorted(node.filter)}
            for node in mesh.nodes
        ],
        "ports": [],
        "gain_A0": circuit.electric.gain,
        "phase_tolerance": circuit.phase_tolerance,
        "power_threshold": circuit.power_threshold,
    }
    for p in circuit.electric.ports:
        entry: dict[str, Any] = {"side": p.side, "row": p.row, "switch": p.switch}
        if p.side == OUTPUT:
            entry["psi_pi_units"] = _pi(p.psi)
            entry["attenuation_A0"] = p.attenuation
        doc["ports"].append(entry)
    if problem is not None:
        doc["problem"] = {
            "objective": problem.objective,
            "via_nodes": sorted(problem.via_nodes),
            "gain_levels_A0": list(problem.gain_levels),
        }
    if medium is not None:
        doc["physical"] = {
            "d0": medium.d0, "M0_4pi": medium.M0_4pi, "H0": medium.H0,
            "gamma": medium.gamma, "geometry": medium.geometry,
        }
    return doc


def dumps_circuit(circuit: RingCircuit, problem: MeshProblem | None = None, medium: SpinWaveMedium | None = None) -> str:
    return json.dumps(circuit_to_dict(circuit, problem, medium), indent=2) + "\n"


def save_circuit(path, circuit: RingCircuit, problem: MeshProblem | None = None, medium: SpinWaveMedium | None = None) -> None:
    FsPath(path).write_text(dumps_circuit(circuit, problem, medium), encoding="utf-8")


def fixture_path(name: str):
    """Path to a bundled fixture circuit file (``example2``, ``example3``, ``example4``)."""
    ref = resources.files("ringsim") / "fixtures" / f"{name}.json"
    if not ref.is_file():
        raise KeyError(f"no bundled fixture {name!r}")
    return ref


def load_fixture(name: str):
    with fixture_path(name).open("r", encoding="utf-8") as fh:
        return load_circuit_file(fh, strict=True)
