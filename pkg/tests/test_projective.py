from fractions import Fraction as F
import random

import pytest

from polytope_forge import _linalg as la
from polytope_forge.errors import (
    FacetDegeneratedError,
    InadmissibleMapError,
    OriginNotInteriorError,
    SingularMapError,
    TypeChangeError,
)
from polytope_forge.fixtures import random_cube, random_projective
from polytope_forge.geometry import (
    HPolytope,
    VPolytope,
    certify_crosspolytope,
    polar_dual,
    realize,
    standard_crosspolytope,
    standard_cube,
    verify_realization,
)
from polytope_forge.projective import (
    NormalTransform,
    ProjectiveMap,
    RayScaling,
    apply_projective,
    apply_projective_h,
    check_admissible,
    compose,
    dual_map,
    normal_transform,
    origin_shift,
    primal_of_polar,
    ray_scale,
)


def test_identity_map():
    P = realize(standard_cube(3))[0]
    assert apply_projective(ProjectiveMap.identity(3), P) == P


def test_skewed_cube_keeps_incidence():
    v = (F(1, 5), F(-1, 7), F(1, 9))
    phi = ProjectiveMap.from_parts(la.identity(3), la.zeros(3), v, 1)
    V, _, inc = realize(standard_cube(3))
    W = apply_projective(phi, V)
    verify_realization(W, inc.facets)


def test_group_law():
    rng = random.Random(3)
    V = realize(standard_cube(3))[0]
    phi = random_projective(rng, 3, V.vertices)
    back = apply_projective(compose(phi.inverse(), phi), V)
    assert back == V


def test_singular_and_inadmissible():
    with pytest.raises(SingularMapError):
        ProjectiveMap(((F(1), F(0)), (F(1), F(0))))
    phi = ProjectiveMap.from_parts(la.identity(2), la.zeros(2), (F(2), F(0)), 1)
    with pytest.raises(InadmissibleMapError):
        check_admissible(phi, realize(standard_cube(2))[0].vertices)


def test_dual_of_identity():
    assert dual_map(ProjectiveMap.identity(3)).is_identity()


def test_dual_of_origin_shift_inverse_is_translation():
    v = (F(1, 3), F(-1, 4), F(2, 7))
    phi = ProjectiveMap.from_parts(la.identity(3), la.zeros(3), v, 1)
    inv = dual_map(phi).inverse()
    x = (F(5), F(-2), F(1, 2))
    assert inv(x) == la.add(x, v)


def test_polar_round_trip_random_cube():
    Q = random_cube(3, 4)
    V = realize(Q)[0]
    rng = random.Random(9)
    phi = random_projective(rng, 3, V.vertices)
    image = apply_projective_h(phi, Q, V.vertices)
    lhs = polar_dual(image)
    rhs = apply_projective(dual_map(phi).inverse(), polar_dual(Q))
    assert sorted(lhs.vertices) == sorted(rhs.vertices)


def test_primal_of_polar_inverts_dual():
    rng = random.Random(5)
    V = realize(standard_cube(3))[0]
    phi = random_projective(rng, 3, V.vertices)
    assert primal_of_polar(dual_map(phi).inverse()) == phi


def test_origin_shift_example():
    P = standard_crosspolytope(3)
    v = (F(1, 4), F(0), F(0))
    phi, shifted = origin_shift(P, v)
    assert shifted.vertices == tuple(la.add(p, v) for p in P.vertices)
    assert phi.c == v


def test_origin_shift_zero_is_identity():
    P = standard_crosspolytope(3)
    phi, shifted = origin_shift(P, la.zeros(3))
    assert phi.is_identity() and shifted == P


def test_origin_shift_consistent_with_polarity():
    # the polar of the shifted set is the image of the cube under the returned map
    cross = standard_crosspolytope(3)
    v = (F(1, 4), F(-1, 8), F(0))
    phi, shifted = origin_shift(cross, v)
    cube = standard_cube(3)
    image = apply_projective_h(phi, cube)
    assert sorted(polar_dual(image).vertices) == sorted(shifted.vertices)


def test_origin_shift_requires_interior():
    with pytest.raises(OriginNotInteriorError):
        origin_shift(standard_crosspolytope(2), (F(1), F(0)))


def test_ray_scale_identity_and_one_vertex():
    P = standard_crosspolytope(3)
    Q, _ = ray_scale(P, RayScaling((1,) * 6))
    assert Q == P
    Q, cert = ray_scale(P, RayScaling((2, 1, 1, 1, 1, 1)))
    certify_crosspolytope(Q)
    assert cert.kind == "ray-equivalent"


def test_ray_scale_type_change():
    quad = VPolytope(((F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(1), F(-1))))
    ray_scale(quad, RayScaling((100, 1, 1, 1)))
    # (1/4, 0) falls inside the triangle spanned by the other three
    with pytest.raises(TypeChangeError):
        ray_scale(quad, RayScaling((F(1, 4), 1, 1, 1)))
    # (1/2, 0) lands on the segment between (0, 1) and (1, -1)
    with pytest.raises(TypeChangeError):
        ray_scale(quad, RayScaling((F(1, 2), 1, 1, 1)))


def test_normal_transform_box():
    Q, _ = normal_transform(standard_cube(3), NormalTransform((2, 1, 1, 1, 1, 1)))
    V = realize(Q)[0]
    xs = sorted({v[0] for v in V.vertices})
    assert xs == [-1, 2]


def test_normal_transform_identity_and_degeneration():
    Q, _ = normal_transform(standard_cube(2), NormalTransform(standard_cube(2).offsets))
    assert Q == standard_cube(2)
    rows = ((F(1), F(1)), (F(1), F(-1)), (F(-1), F(1)), (F(-1), F(-1)))
    cross = HPolytope(tuple((a, F(1)) for a in rows))
    normal_transform(cross, NormalTransform((F(1, 2), 1, 1, 1)))
    with pytest.raises(FacetDegeneratedError):
        normal_transform(standard_cube(2), NormalTransform((F(-1), 1, 1, 1)))
