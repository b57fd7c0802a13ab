import json

import pytest

import flatsc


def test_torus_info():
    s = flatsc.Surface.builtin("square_torus")
    info = s.info()
    assert info["genus"] == 1
    assert info["marked_points"] == 1
    assert info["stratum"] == [0]


def test_enumeration_matches_primitive_vectors():
    s = flatsc.Surface.builtin("square_torus")
    conns = s.connections("25")
    assert len(conns) == 24
    assert len({c["id"] for c in conns}) == 24


def test_graph_and_distance():
    s = flatsc.Surface.builtin("square_torus")
    g = s.graph("2")
    assert len(g["ids"]) == 4
    assert len(g["edges"]) == 5
    a, b = g["ids"][0], g["ids"][1]
    assert s.distance(a, b, "2") == 1


def test_octagon_triangulation_and_cylinders():
    s = flatsc.Surface.builtin("regular_octagon")
    assert len(s.triangulate()) == 9
    cyl = s.cylinders("1", "0")
    assert len(cyl) == 2


def test_rigidity():
    s = flatsc.Surface.builtin("square_torus")
    rep = s.verify_affine("1,1;0,1", "10")
    assert rep["valid"]
    assert rep["triangle_failures"] == 0
    q = s.orbits(["0,-1;1,0", "1,1;0,1"], "25", "4")
    assert q["vertex_orbits"] == 1 and q["edge_orbits"] == 1
    assert s.wedges("25") == [("1/1+0/1r", 45)]


def test_errors():
    with pytest.raises(flatsc.FlatscError, match="UnknownName"):
        flatsc.Surface.builtin("sphere")
    s = flatsc.Surface.builtin("square_torus")
    with pytest.raises(flatsc.FlatscError, match="SingularMatrix"):
        s.verify_affine("1,1;1,1", "2")


def test_run_matches_cli():
    code, out, err = flatsc.run(["--builtin", "square_torus", "info"])
    assert code == 0 and err == ""
    assert json.loads(out)["genus"] == 1
    code, _, err = flatsc.run(["--builtin", "square_torus"])
    assert code == 2
    assert json.loads(err)["error"] == "UsageError"
