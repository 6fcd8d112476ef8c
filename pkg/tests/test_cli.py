import json

import pytest

from ringsim.cli import main, parse_phase
from ringsim.files import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factorize(capsys):
    code, out, _ = run(capsys, "factorize", "15")
    assert code == 0
    assert out.splitlines()[0] == "3 × 5"
    code, out, _ = run(capsys, "factorize", "107")
    assert code == 1
    assert "no factorization over device primes" in out
    code, out, _ = run(capsys, "factorize", "--primes", "2,3", "6", "--json")
    assert code == 0 and json.loads(out)["factors"] == [2, 3]


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "factorize", "1")[0] == 2
    assert run(capsys, "solve", "--circuit", "/nonexistent.json")[0] == 2


def test_sweep_phase_csv(capsys):
    code, out, _ = run(capsys, "sweep-phase", "--fixture", "example2", "--step", "0.1pi")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "param_value,path_count,sensor_bits"
    assert len(lines) == 22


def test_solve_fixtures(capsys):
    code, out, _ = run(capsys, "solve", "--fixture", "example3")
    assert code == 0 and "nodes 3-6-9" in out and "4 A0" in out
    code, out, _ = run(capsys, "solve", "--fixture", "example4", "--json")
    doc = json.loads(out)
    assert doc["solution"]["gain_A0"] == 8.0
    assert {2, 4, 6} <= set(doc["solution"]["path"]["node_ids"])
    code, out, _ = run(capsys, "solve", "--fixture", "example2")
    assert code == 0 and "1 resonant path" in out


def test_solve_silent(capsys, tmp_path):
    doc = json.loads(fixture_path("example2").read_text())
    doc["gain_A0"] = 2
    path = tmp_path / "weak.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "solve", "--circuit", str(path))[0] == 1


def test_out_bundle(capsys, tmp_path):
    out = tmp_path / "run"
    code, _, _ = run(capsys, "sweep-gain", "--fixture", "example3", "--out", str(out))
    assert code == 0
    assert {p.name for p in out.iterdir()} == {"sweep_gain.csv", "sweep_gain.json", "manifest.json"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "sweep-gain" and manifest["source"] == "example3"
    assert "timestamp" not in manifest


def test_seed_recorded(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RINGSIM_SEED", "42")
    run(capsys, "capacity", "--n", "5", "--l", "1e-4", "--vg", "1e4", "--out", str(tmp_path))
    assert json.loads((tmp_path / "manifest.json").read_text())["seed"] == "42"


def test_capacity(capsys):
    code, out, _ = run(capsys, "capacity", "--n", "5", "--l", "1e-4", "--vg", "1e4", "--json")
    assert code == 0 and json.loads(out)["corner_paths"] == "252"
    code, out, _ = run(capsys, "capacity", "--n", "5", "--l", "1e-4", "--vg", "1e4")
    assert "252" in out


def test_dispersion(capsys):
    code, out, _ = run(capsys, "dispersion", "--points", "5", "--geometry", "BVMSW")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "k_rad_per_m,f_GHz" and len(rows) == 6
    f = [float(r.split(",")[1]) for r in rows[1:]]
    assert f == sorted(f, reverse=True)


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", str(fixture_path("example4")), "--strict")
    assert code == 0 and "ok" in out
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2}')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "error" in err


def test_tolerance_override(capsys):
    code, out, _ = run(capsys, "solve", "--fixture", "example2", "--tolerance", "0.001", "--json")
    assert code == 0
    assert run(capsys, "solve", "--fixture", "example2", "--tolerance", "5")[0] == 2


def test_parse_phase():
    import math

    assert parse_phase("0.1pi") == pytest.approx(0.1 * math.pi)
    assert parse_phase("pi") == pytest.approx(math.pi)
    assert parse_phase("1.5") == pytest.approx(1.5 * math.pi)
