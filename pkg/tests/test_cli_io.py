import json
from fractions import Fraction as F

import pytest

from polytope_forge import serialize
from polytope_forge.cli import main
from polytope_forge.fixtures import random_crosspolytope, random_cube
from polytope_forge.geometry import VPolytope, standard_crosspolytope, standard_cube
from polytope_forge.normalizer import normalize_cube, relate_cubes
from polytope_forge.off import export_off


def _save(tmp_path, name, P):
    path = tmp_path / name
    path.write_text(serialize.dumps(serialize.polytope_to_doc(P)))
    return str(path)


def test_rational_format():
    assert serialize.fmt(F(-3, 4)) == "-3/4"
    assert serialize.fmt(5) == "5"
    assert serialize.parse("-3/4") == F(-3, 4)
    for bad in (0.5, "1/0", "x", True):
        with pytest.raises(serialize.SchemaError):
            serialize.parse(bad)


def test_polytope_round_trip():
    for P in (random_cube(3, 2), random_crosspolytope(3, 2)):
        doc = json.loads(serialize.dumps(serialize.polytope_to_doc(P, provenance={"seed": 2})))
        Q, _, prov = serialize.polytope_from_doc(doc)
        assert Q == P and prov == {"seed": 2}


def test_digest_is_representation_independent():
    P = standard_cube(3)
    V = VPolytope(tuple(reversed(standard_crosspolytope(3).vertices)))
    assert serialize.digest(P) == serialize.digest(standard_cube(3))
    assert serialize.digest(V) == serialize.digest(standard_crosspolytope(3))
    assert serialize.digest(P) != serialize.digest(V)


def test_schema_version_checked():
    doc = serialize.polytope_to_doc(standard_cube(2))
    doc["schema-version"] = 99
    with pytest.raises(serialize.SchemaError):
        serialize.polytope_from_doc(doc)


def test_log_round_trip_and_replay():
    log = relate_cubes(random_cube(3, 1), random_cube(3, 2))
    doc = json.loads(serialize.dumps(serialize.log_to_doc(log)))
    assert serialize.replay_matches(doc)
    back = serialize.log_from_doc(doc)
    assert back.tags() == log.tags()
    assert back.final.rows == log.final.rows


def test_tampered_log_detected():
    doc = serialize.log_to_doc(normalize_cube(random_cube(3, 4)))
    doc["final-digest"] = "0" * 64
    assert not serialize.replay_matches(doc)


def test_logs_are_byte_identical():
    a = serialize.dumps(serialize.log_to_doc(relate_cubes(random_cube(3, 7), random_cube(3, 8))))
    b = serialize.dumps(serialize.log_to_doc(relate_cubes(random_cube(3, 7), random_cube(3, 8))))
    assert a == b


def test_off_cube():
    lines = export_off(standard_cube(3)).splitlines()
    assert lines[0] == "OFF"
    assert lines[1].split()[:2] == ["8", "6"]
    assert all(line.startswith("4 ") for line in lines[2 + 8:])


def test_off_octahedron():
    lines = export_off(standard_crosspolytope(3)).splitlines()
    assert lines[1].split()[:2] == ["6", "8"]
    assert all(line.startswith("3 ") for line in lines[2 + 6:])


def test_off_schlegel_4cube():
    lines = export_off(standard_cube(4)).splitlines()
    nv, nf = map(int, lines[1].split()[:2])
    assert (nv, nf) == (16, 24)
    assert all(len(line.split()) == 3 for line in lines[2:2 + nv])


def test_cli_round_trip(tmp_path, capsys):
    a = _save(tmp_path, "a.json", random_cube(2, 1))
    b = _save(tmp_path, "b.json", random_cube(2, 2))
    out = str(tmp_path / "t.json")
    assert main(["tower", a, b, "--dim", "3", "--out", out]) == 0
    assert main(["fvector", out]) == 0
    f = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert f["dim"] == 3 and f["f"][0] - f["f"][1] + f["f"][2] == 2
    assert main(["verify", out, "--oracle"]) == 0
    assert main(["export-off", out, str(tmp_path / "t.off")]) == 0
    log = str(tmp_path / "log.json")
    assert main(["relate", a, b, "--log", log]) == 0
    assert serialize.replay_matches(json.loads(open(log).read()))


def test_cli_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{bad")
    assert main(["fvector", str(bad)]) == 1
    assert main(["fvector", str(tmp_path / "missing.json")]) == 1
    a = _save(tmp_path, "a.json", random_cube(3, 1))
    b = _save(tmp_path, "b.json", random_cube(2, 1))
    assert main(["relate", a, b]) == 1
    assert main(["tower", b, b, "--dim", "4"]) == 1
    assert main(["no-such-command"]) == 1


def test_cli_not_a_cube_is_input_error(tmp_path):
    pts = [(F(x), F(y), F(z)) for (x, y) in ((0, 0), (1, 0), (0, 1)) for z in (0, 1)]
    path = _save(tmp_path, "prism.json", VPolytope(tuple(pts)))
    assert main(["normalize", path]) == 1


def test_cli_certificate_failure_exit(tmp_path, monkeypatch, capsys):
    from polytope_forge import normalizer
    from polytope_forge.errors import BoundViolationError, CertificateError

    path = _save(tmp_path, "a.json", random_cube(3, 1))

    def broken(*a, **k):
        raise CertificateError("standard", "forced")

    monkeypatch.setattr(normalizer, "normalize_cube", broken)
    assert main(["normalize", path]) == 2

    def too_long(*a, **k):
        raise BoundViolationError("log has 15 entries, bound is 14", 15)

    monkeypatch.setattr(normalizer, "normalize_cube", too_long)
    assert main(["normalize", path]) == 2
    assert "15" in capsys.readouterr().err


def test_cli_schedule(capsys):
    assert main(["schedule", "--target", "1,2", "--dim", "4", "--steps", "4"]) == 0
    rows = [json.loads(x) for x in capsys.readouterr().out.strip().splitlines()]
    cos = [F(r["cos2"]) for r in rows]
    assert len(cos) == 4 and cos == sorted(cos)
