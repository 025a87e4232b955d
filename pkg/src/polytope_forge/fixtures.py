"""Seeded random rational cubes, crosspolytopes and quadrilaterals."""

from __future__ import annotations

import random

from . import _linalg as la
from ._linalg import Fraction
from .errors import PolytopeError
from .geometry import HPolytope, VPolytope, certify_cube, standard_crosspolytope, standard_cube
from .projective import ProjectiveMap, apply_projective, apply_projective_h


def _rand_frac(rng: random.Random, lo: int, hi: int, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_projective(rng: random.Random, d: int, vertices, tries: int = 100) -> ProjectiveMap:
    """A random map that is admissible on ``vertices`` (denominator > 0)."""
    bound = max(sum(abs(x) for x in v) for v in vertices)
    for _ in range(tries):
        A = [[Fraction(rng.randint(-3, 3)) + (2 if i == j else 0) for j in range(d)] for i in range(d)]
        if la.det(A) == 0:
            continue
        b = [_rand_frac(rng, -1, 1) for _ in range(d)]
        # keep |c . v| < 1/2 on every vertex
        c = [Fraction(rng.randint(-2, 2), 5) / bound for _ in range(d)]
        try:
            return ProjectiveMap.from_parts(A, b, c, 1)
        except PolytopeError:
            continue
    raise RuntimeError("no admissible random map found")


def random_cube(d: int, seed: int) -> HPolytope:
    """A combinatorial d-cube: random offsets on [-1,1]^d, then a random projective map."""
    rng = random.Random(seed)
    while True:
        rows = []
        for a, _ in standard_cube(d).rows:
            rows.append((a, _rand_frac(rng, 1, 2)))
        H = HPolytope(tuple(rows))
        verts = [tuple(r[0] if s > 0 else -r[1] for s, r in zip(signs, _pairs(H))) for signs in _signs(d)]
        phi = random_projective(rng, d, verts)
        Q = apply_projective_h(phi, H, verts)
        try:
            certify_cube(Q)
        except PolytopeError:
            continue
        return Q


def _pairs(H: HPolytope):
    # offsets of +e_i and -e_i rows, as (upper, lower magnitude)
    offs = H.offsets
    return [(offs[2 * i], offs[2 * i + 1]) for i in range(H.dim)]


def _signs(d: int):
    import itertools

    return itertools.product((1, -1), repeat=d)


def random_crosspolytope(d: int, seed: int) -> VPolytope:
    """Random ray scaling of conv(+-e_i) followed by a random admissible map.

    The origin is kept strictly inside.
    """
    rng = random.Random(seed)
    from .geometry import certify_crosspolytope
    from .hull import hull_facets

    while True:
        base = standard_crosspolytope(d)
        scaled = VPolytope(tuple(la.scale(_rand_frac(rng, 1, 3), v) for v in base.vertices))
        phi = random_projective(rng, d, scaled.vertices)
        P = apply_projective(phi, scaled)
        try:
            certify_crosspolytope(P)
        except PolytopeError:
            continue
        if all(b > 0 for _, b in hull_facets(P.vertices)):
            return P


def random_quadrilateral(seed: int) -> HPolytope:
    return random_cube(2, seed)


def quadrilateral_vertices(Q: HPolytope):
    from .geometry import realize

    return realize(Q)[0]
