"""OFF export for external viewers. Lossy and one-way.

d = 3 writes the polytope itself. d = 4 writes a Schlegel diagram: the
projection point is the centroid of facet 0 pushed away from the vertex
centroid, p = c_F + t (c_F - c), with t halved from 1 until p lies beyond
facet 0 only. Every vertex is projected from p onto the hyperplane of facet
0; the OFF faces are the 2-faces of the polytope.
"""

from __future__ import annotations

from functools import cmp_to_key

from . import _linalg as la
from .geometry import HPolytope, face_sets, hull, realize


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _cyclic_order(points, idx, outward=None):
    """Indices of a planar convex polygon in R^3 in cyclic order (exact)."""
    pts = [points[i] for i in idx]
    o = la.centroid(pts)
    rel = [la.sub(p, o) for p in pts]
    normal = None
    for r in rel[1:]:
        n = _cross(rel[0], r)
        if any(x != 0 for x in n):
            normal = n
            break
    if outward is not None and la.dot(normal, outward) < 0:
        normal = tuple(-x for x in normal)
    ref = rel[0]

    def half(r):
        # 0 for angles in [0, pi), 1 for [pi, 2 pi) measured from ref
        s = la.dot(_cross(ref, r), normal)
        if s > 0 or (s == 0 and la.dot(ref, r) > 0):
            return 0
        return 1

    def cmp(i, j):
        hi, hj = half(rel[i]), half(rel[j])
        if hi != hj:
            return hi - hj
        s = la.dot(_cross(rel[i], rel[j]), normal)
        return -1 if s > 0 else (1 if s < 0 else 0)

    order = sorted(range(len(idx)), key=cmp_to_key(cmp))
    return [idx[k] for k in order]


def _fmt(x, digits):
    return format(float(x), f".{digits}g")


def _render(points, faces, digits):
    lines = ["OFF", f"{len(points)} {len(faces)} 0"]
    for p in points:
        lines.append(" ".join(_fmt(x, digits) for x in p))
    for f in faces:
        lines.append(" ".join([str(len(f))] + [str(i) for i in f]))
    return "\n".join(lines) + "\n"


def _vrep(P):
    if isinstance(P, HPolytope):
        V, H, inc = realize(P)
    else:
        V, H, inc = hull(P.vertices)
    order = sorted(range(len(V.vertices)), key=lambda i: V.vertices[i])
    pos = {old: new for new, old in enumerate(order)}
    verts = [V.vertices[i] for i in order]
    facets = [sorted(pos[i] for i in F) for F in inc.facets]
    return verts, H, facets, inc, pos


def export_off(P, digits: int = 12) -> str:
    """OFF text for a 3- or 4-polytope (V or H given). Vertices sorted lexicographically."""
    d = P.dim
    if d == 3:
        verts, H, facets, _, _ = _vrep(P)
        faces = [_cyclic_order(verts, F, H.rows[j][0]) for j, F in enumerate(facets)]
        return _render(verts, faces, digits)
    if d == 4:
        verts, H, facets, inc, pos = _vrep(P)
        a, b = H.rows[0]
        cF = la.centroid([verts[i] for i in facets[0]])
        c = la.centroid(verts)
        t = la.Fraction(1)
        while True:
            p = la.add(cF, la.scale(t, la.sub(cF, c)))
            if all(la.dot(aj, p) < bj for aj, bj in H.rows[1:]):
                break
            t /= 2
        basis = la.nullspace([a], 4)
        o = verts[facets[0][0]]
        # coordinates in the facet hyperplane: solve o + B y = projected point
        B = la.transpose(basis)
        BtB_inv = la.inverse(la.matmul(basis, B))
        proj = []
        for x in verts:
            s = (b - la.dot(a, p)) / la.dot(a, la.sub(x, p))
            q = la.add(p, la.scale(s, la.sub(x, p)))
            proj.append(tuple(la.matvec(BtB_inv, la.matvec(basis, la.sub(q, o)))))
        faces = []
        for F, k in sorted(face_sets(inc).items(), key=lambda fk: sorted(fk[0])):
            if k == 2:
                idx = sorted(pos[i] for i in F)
                faces.append(_cyclic_order(proj, idx))
        return _render(proj, faces, digits)
    raise ValueError(f"OFF export supports d = 3 or 4, got {d}")
