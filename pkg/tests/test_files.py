import io
import json
import math

import pytest

from ringsim.circuit import ElectricPart, RingCircuit, build_mesh, default_ports
from ringsim.compiler import FIXTURES, build_mesh_problem
from ringsim.dispersion import YIG_DELAY_LINE_1
from ringsim.files import (
    CircuitFileError,
    PhaseWrapWarning,
    circuit_from_dict,
    circuit_to_dict,
    dumps_circuit,
    load_circuit,
    load_circuit_file,
    load_fixture,
    parse_pi,
    save_circuit,
)


def small_doc():
    return {
        "n": 2,
        "nodes": [{"id": i, "delta_pi_units": 0.1 * i, "filter": [1]} for i in range(1, 5)],
        "ports": [
            {"side": "input", "row": 1},
            {"side": "output", "row": 2, "psi_pi_units": "1.2pi", "attenuation_A0": 1},
        ],
        "gain_A0": 6,
    }


def test_parse_pi():
    assert parse_pi("0.6pi", "x") == 0.6
    assert parse_pi(" 1 pi ", "x") == 1.0
    assert parse_pi(0.25, "x") == 0.25
    with pytest.warns(PhaseWrapWarning):
        parse_pi(2.5, "x")
    with pytest.raises(CircuitFileError):
        parse_pi("half", "x")


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_match_builders(name):
    circuit, problem, _ = load_fixture(name)
    built = build_mesh_problem(name)
    assert circuit_to_dict(circuit, problem) == circuit_to_dict(built.circuit, built)


def test_round_trip(tmp_path):
    circuit, problem, _ = circuit_from_dict(small_doc())
    path = tmp_path / "c.json"
    save_circuit(path, circuit, problem, YIG_DELAY_LINE_1)
    again, _, medium = load_circuit_file(path, strict=True)
    assert circuit_to_dict(again) == circuit_to_dict(circuit)
    assert medium == YIG_DELAY_LINE_1
    assert dumps_circuit(again, None, medium) == path.read_text()


def test_wrapped_phase_warns():
    doc = small_doc()
    doc["nodes"][0]["delta_pi_units"] = 2.3
    with pytest.warns(PhaseWrapWarning):
        circuit, _, _ = circuit_from_dict(doc)
    assert circuit.mesh.node(1).delta.pi_units == pytest.approx(0.3)


def test_unknown_fields():
    doc = small_doc() | {"colour": "blue"}
    with pytest.warns(UserWarning):
        circuit_from_dict(doc)
    with pytest.raises(CircuitFileError, match="colour"):
        circuit_from_dict(doc, strict=True)


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d["nodes"][2].update(filter=[]), "node id 3"),
        (lambda d: d["nodes"][1].update(delta_pi_units="abc"), "nodes[1]"),
        (lambda d: d.pop("gain_A0"), "gain_A0"),
        (lambda d: d.update(adjacency="hex"), "adjacency"),
        (lambda d: d["nodes"].pop(), "ids 1..4"),
        (lambda d: d["ports"][0].update(psi_pi_units=0.5), "ports[0]"),
        (lambda d: d["ports"][1].update(row=3), "row 3"),
        (lambda d: d.update(problem={"objective": "shortest-via-nodes", "via_nodes": [2]}), "complement"),
    ],
)
def test_errors_name_the_field(mutate, fragment):
    doc = small_doc()
    mutate(doc)
    with pytest.raises(CircuitFileError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        circuit_from_dict(doc)


def test_bad_json_reports_position():
    with pytest.raises(CircuitFileError, match=r"<stream>:2:"):
        load_circuit(io.StringIO('{"n": 2,\n  oops}'))


def test_not_an_object():
    with pytest.raises(CircuitFileError):
        circuit_from_dict([1, 2])


def test_serialized_phases_stay_in_range():
    c = RingCircuit(build_mesh(2, deltas=[-1e-15, 0.0, 0.0, 0.0]), ElectricPart(3.0, default_ports(2, psi=2 * math.pi - 1e-15)))
    doc = json.loads(dumps_circuit(c))
    assert all(0 <= n["delta_pi_units"] < 2 for n in doc["nodes"])
    assert all(0 <= p.get("psi_pi_units", 0) < 2 for p in doc["ports"])
