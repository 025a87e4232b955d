"""Exact convex hulls by the double description method.

This is the workhorse for switching between V- and H-representations. All
arithmetic is on Python integers: constraints are homogenized and scaled to
primitive integer vectors, and new rays are primitive integer combinations.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from . import _linalg as la
from ._linalg import Fraction
from .errors import DegenerateError, UnboundedError


def _prim(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def extreme_rays(constraints: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y in R^n : m . y >= 0 for m in constraints}."""
    rows = [tuple(int(x) for x in m) for m in constraints]
    if la.rank(rows) < n:
        raise DegenerateError("cone is not pointed (constraint matrix rank < n)")

    basis: list[int] = []
    picked: list[tuple[int, ...]] = []
    for i, r in enumerate(rows):
        if la.rank(picked + [r]) > len(picked):
            picked.append(r)
            basis.append(i)
            if len(basis) == n:
                break
    inv = la.inverse(la.mat(picked))
    rays: list[tuple[int, ...]] = []
    zsets: list[int] = []
    all_basis = 0
    for i in basis:
        all_basis |= 1 << i
    for k in range(n):
        col = [inv[j][k] for j in range(n)]
        rays.append(la.primitive(col))
        zsets.append(all_basis & ~(1 << basis[k]))

    in_basis = set(basis)
    for i, m in enumerate(rows):
        if i in in_basis:
            continue
        bit = 1 << i
        vals = [_idot(m, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            zsets = [z | bit if vals[k] == 0 else z for k, z in enumerate(zsets)]
            continue
        new_rays: list[tuple[int, ...]] = []
        new_z: list[int] = []
        for p in pos:
            zp = zsets[p]
            for q in neg:
                z = zp & zsets[q]
                if z.bit_count() < n - 2:
                    continue
                adjacent = True
                for k, zk in enumerate(zsets):
                    if k != p and k != q and (zk & z) == z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                r = _prim([vp * b - vq * a for a, b in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_z.append(z | bit)
        keep = [k for k, v in enumerate(vals) if v >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zsets = [(zsets[k] | bit) if vals[k] == 0 else zsets[k] for k in keep] + new_z
    return rays


def _homogenize_point(p) -> tuple[int, ...]:
    return la.primitive((Fraction(1),) + tuple(p))


def hull_facets(points: Sequence[Sequence]) -> list[tuple[la.Vector, Fraction]]:
    """Irredundant facet rows (a, b), a.x <= b, of conv(points).

    Rows are returned as primitive integer vectors, in no particular order.
    """
    pts = [la.vec(p) for p in points]
    if not pts:
        raise DegenerateError("empty point set")
    d = len(pts[0])
    if la.affine_rank(pts) < d:
        raise DegenerateError("points are not full-dimensional")
    cons = [_homogenize_point(p) for p in pts]
    rows = []
    for y in extreme_rays(cons, d + 1):
        a = tuple(Fraction(-x) for x in y[1:])
        rows.append((a, Fraction(y[0])))
    return rows


def vertices_of_rows(rows: Sequence[tuple[Sequence, object]], dim: int) -> list[la.Vector]:
    """Vertices of {x : a.x <= b}. Raises if unbounded or not full-dimensional."""
    cons = []
    for a, b in rows:
        cons.append(la.primitive((la.frac(b),) + tuple(-x for x in la.vec(a))))
    cons.append((1,) + (0,) * dim)
    try:
        rays = extreme_rays(cons, dim + 1)
    except DegenerateError as exc:
        raise UnboundedError("H-representation does not bound a pointed region") from exc
    verts = []
    for r in rays:
        if r[0] == 0:
            raise UnboundedError("H-representation is unbounded")
        t = r[0]
        verts.append(tuple(Fraction(x, t) for x in r[1:]))
    if la.affine_rank(verts) < dim:
        raise DegenerateError("H-representation is not full-dimensional")
    return verts
