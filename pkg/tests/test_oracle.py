from fractions import Fraction as F
import random

import pytest

from polytope_forge.errors import DegenerateError
from polytope_forge.geometry import hull, realize, standard_cube, standard_crosspolytope
from polytope_forge.oracle import (
    ENV_VAR,
    OracleBoundsExceededError,
    brute_force_hull,
    oracle_bounds,
    same_incidence,
)


def test_cube_and_cross():
    V, H, inc = brute_force_hull(realize(standard_cube(4))[0].vertices)
    assert len(V.vertices) == 16 and len(H.rows) == 8
    V, H, inc = brute_force_hull(standard_crosspolytope(4).vertices)
    assert len(H.rows) == 16


def test_interior_points_dropped():
    pts = list(realize(standard_cube(3))[0].vertices) + [(F(0), F(0), F(0)), (F(1, 2), F(0), F(1))]
    V, _, _ = brute_force_hull(pts)
    assert len(V.vertices) == 8


def test_random_4d_matches_hull():
    rng = random.Random(11)
    for _ in range(3):
        pts = {tuple(F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(4)) for _ in range(25)}
        pts = sorted(pts)
        V, H, inc = hull(pts)
        V2, H2, inc2 = brute_force_hull(pts)
        assert H.canonical() == H2.canonical()
        assert same_incidence(V, inc, V2, inc2)


def test_large_coordinates_use_exact_path():
    big = F(1, 10**150)
    pts = [tuple(x * big for x in v) for v in realize(standard_cube(3))[0].vertices]
    V, H, _ = brute_force_hull(pts)
    assert len(V.vertices) == 8 and len(H.rows) == 6


def test_bounds(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert oracle_bounds() == (5, 200)
    with pytest.raises(OracleBoundsExceededError):
        brute_force_hull(standard_crosspolytope(3).vertices, max_points=5)
    monkeypatch.setenv(ENV_VAR, "6:300")
    assert oracle_bounds() == (6, 300)
    monkeypatch.setenv(ENV_VAR, "400")
    assert oracle_bounds() == (5, 400)


def test_degenerate():
    with pytest.raises(DegenerateError):
        brute_force_hull([(F(0), F(0), F(0)), (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(1), F(1), F(0))])
