from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from polytope_forge import _linalg as la
from polytope_forge.errors import CertificateError, DegenerateError, UnboundedError
from polytope_forge.fixtures import random_cube, random_crosspolytope
from polytope_forge.geometry import (
    HPolytope,
    certify_cube,
    certify_crosspolytope,
    f_vector_of,
    hull,
    incidence,
    is_combinatorial_cube,
    polar_dual,
    polar_dual_v,
    realize,
    standard_crosspolytope,
    standard_cube,
    standard_cube_vertices,
    standard_simplex,
    verify_realization,
)
from polytope_forge.oracle import brute_force_hull, same_incidence


def test_crosspolytope_facets():
    _, H, _ = hull(standard_crosspolytope(3).vertices)
    assert len(H.rows) == 8
    for a, b in H.rows:
        assert b == 1 and all(abs(x) == 1 for x in a)


def test_cube_incidence_degree():
    V, H, inc = realize(standard_cube(3))
    assert len(V.vertices) == 8
    assert all(len(inc.vertex_facets(i)) == 3 for i in range(8))


def test_crosspolytope_incidence_degree():
    for d in (2, 3, 4):
        _, _, inc = hull(standard_crosspolytope(d).vertices)
        assert len(inc.facets) == 2 ** d
        assert all(len(inc.vertex_facets(i)) == 2 ** (d - 1) for i in range(2 * d))


@pytest.mark.parametrize("d", range(1, 7))
def test_cube_face_counts(d):
    from math import comb

    if d == 1:
        return
    _, _, inc = realize(standard_cube(d)) if d <= 5 else hull(standard_cube_vertices(d).vertices)
    f = f_vector_of(inc)
    assert f.entries == tuple(2 ** (d - i) * comb(d, i) for i in range(d))


def test_cross4_fvector():
    _, _, inc = hull(standard_crosspolytope(4).vertices)
    assert f_vector_of(inc).entries == (8, 24, 32, 16)


def test_double_polarity_random_cubes():
    for seed in range(5):
        Q = random_crosspolytope(3, seed)
        back = polar_dual_v(Q)
        again = polar_dual(back)
        assert sorted(again.vertices) == sorted(Q.vertices)


def test_polar_involution_against_oracle():
    P = random_crosspolytope(3, 7)
    H = polar_dual_v(P)
    V = polar_dual(H)
    V2, _, _ = brute_force_hull(V.vertices)
    assert sorted(V2.vertices) == sorted(P.vertices)


def test_shifted_simplex():
    S = standard_simplex(3)
    shift = (F(-1, 8),) * 3
    pts = [la.add(v, shift) for v in S.vertices]
    _, H, _ = hull(pts)
    assert len(H.rows) == 4
    assert all(b > 0 for _, b in H.rows)


def test_unbounded_and_degenerate():
    half = HPolytope((((F(1), F(0)), F(1)), ((F(0), F(1)), F(1))))
    with pytest.raises(UnboundedError):
        realize(half)
    with pytest.raises(DegenerateError):
        hull([(F(0), F(0)), (F(1), F(1)), (F(2), F(2))])


def test_incidence_mismatch():
    V = standard_cube_vertices(2)
    H = HPolytope((((F(1), F(0)), F(F(1, 2))),) + standard_cube(2).rows[1:])
    with pytest.raises(Exception):
        incidence(V, H)


def test_verify_realization_rejects_wrong_candidates():
    V, _, inc = realize(standard_cube(3))
    good = verify_realization(V, inc.facets)
    assert good.kind == "valid-realization"
    bad = list(inc.facets)
    bad[0] = frozenset(list(bad[0])[:3]) | frozenset(list(bad[1])[:1])
    with pytest.raises(CertificateError):
        verify_realization(V, bad)


def test_type_recognition():
    certify_cube(standard_cube(4))
    certify_crosspolytope(standard_crosspolytope(3))
    # triangular prism is not a cube
    pts = [(F(x), F(y), F(z)) for (x, y) in ((0, 0), (1, 0), (0, 1)) for z in (0, 1)]
    _, _, inc = hull(pts)
    assert not is_combinatorial_cube(inc)
    with pytest.raises(CertificateError, match="combinatorial-cube"):
        certify_cube(hull(pts)[1])


def test_pentagon_prism_not_cube():
    pent = [(F(0), F(2)), (F(2), F(1)), (F(1), F(-2)), (F(-1), F(-2)), (F(-2), F(1))]
    pts = [p + (F(z),) for p in pent for z in (0, 1)]
    _, _, inc = hull(pts)
    assert len(inc.facets) == 7
    assert not is_combinatorial_cube(inc)


def test_random_projective_cubes_are_simple():
    for seed in range(3):
        V, _, inc = realize(random_cube(4, seed))
        assert all(len(inc.vertex_facets(i)) == 4 for i in range(len(V.vertices)))
        V2, _, inc2 = brute_force_hull(V.vertices)
        assert same_incidence(V, inc, V2, inc2)


small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=6, max_size=14, unique=True))
def test_hull_matches_oracle(points):
    pts = [tuple(F(x) for x in p) for p in points]
    if la.affine_rank(pts) < 3:
        return
    V, H, inc = hull(pts)
    V2, H2, inc2 = brute_force_hull(pts)
    assert sorted(V.vertices) == sorted(V2.vertices)
    assert H.canonical() == H2.canonical()
    assert same_incidence(V, inc, V2, inc2)
