"""Polytope representations, polarity, incidence and combinatorial certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _linalg as la
from ._linalg import Fraction
from .errors import (
    CertificateError,
    DegenerateError,
    NotACrosspolytopeError,
    NotACubeError,
    OriginNotInteriorError,
    RepresentationMismatchError,
)
from .hull import hull_facets, vertices_of_rows


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of an ordered list of rational vertices.

    Order is meaningful: it carries vertex labels through the transformation
    pipelines. Use :meth:`same_as` for order-insensitive comparison.
    """

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(la.vec(v) for v in self.vertices))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def __len__(self):
        return len(self.vertices)

    def same_as(self, other: "VPolytope") -> bool:
        return sorted(self.vertices) == sorted(other.vertices)


@dataclass(frozen=True)
class HPolytope:
    """{x : <a_i, x> <= b_i}, rows kept in the given order."""

    rows: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "rows", tuple((la.vec(a), la.frac(b)) for a, b in self.rows)
        )

    @property
    def dim(self) -> int:
        return len(self.rows[0][0])

    @property
    def normals(self):
        return tuple(a for a, _ in self.rows)

    @property
    def offsets(self):
        return tuple(b for _, b in self.rows)

    def normalized(self) -> "HPolytope":
        """Each row rescaled (positively) to coprime integers; order kept."""
        out = []
        for a, b in self.rows:
            p = la.primitive(tuple(a) + (b,))
            out.append((p[:-1], p[-1]))
        return HPolytope(tuple(out))

    def canonical(self) -> tuple:
        """Order-free syntactic form: sorted primitive integer rows."""
        return tuple(sorted((tuple(a), b) for a, b in self.normalized().rows))

    def same_as(self, other: "HPolytope") -> bool:
        return self.canonical() == other.canonical()

    def contains(self, x, strict: bool = False) -> bool:
        if strict:
            return all(la.dot(a, x) < b for a, b in self.rows)
        return all(la.dot(a, x) <= b for a, b in self.rows)


@dataclass(frozen=True)
class IncidenceStructure:
    """Vertex/facet incidence: ``facets[j]`` is the set of vertex indices on facet j."""

    dim: int
    n_vertices: int
    facets: tuple

    def __post_init__(self):
        object.__setattr__(self, "facets", tuple(frozenset(f) for f in self.facets))

    @property
    def matrix(self) -> tuple:
        return tuple(
            tuple(i in f for f in self.facets) for i in range(self.n_vertices)
        )

    def vertex_facets(self, i: int) -> frozenset:
        return frozenset(j for j, f in enumerate(self.facets) if i in f)


@dataclass(frozen=True)
class OppositePairing:
    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    @property
    def order(self) -> tuple:
        return tuple(i for p in self.pairs for i in p)


@dataclass(frozen=True)
class Certificate:
    """Record of exact checks that all passed. Never built for a failed check."""

    kind: str
    checks: tuple
    witness: dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "checks": list(self.checks), "witness": self.witness}


# ---------------------------------------------------------------------------
# hull and polarity
# ---------------------------------------------------------------------------


def hull(points: Iterable[Sequence]):
    """Workhorse exact hull: (VPolytope, HPolytope, IncidenceStructure).

    Duplicate and non-extreme points are dropped; vertex order follows first
    appearance in ``points``.
    """
    pts = []
    seen = set()
    for p in points:
        p = la.vec(p)
        if p not in seen:
            seen.add(p)
            pts.append(p)
    rows = hull_facets(pts)
    return _assemble(pts, rows)


def _assemble(pts, rows):
    d = len(pts[0])
    tight = [
        [i for i, p in enumerate(pts) if la.dot(a, p) == b] for a, b in rows
    ]
    keep = []
    for i, p in enumerate(pts):
        normals = [rows[j][0] for j, t in enumerate(tight) if i in t]
        if la.rank(normals) == d:
            keep.append(i)
    index = {old: new for new, old in enumerate(keep)}
    verts = tuple(pts[i] for i in keep)
    facets = tuple(frozenset(index[i] for i in t if i in index) for t in tight)
    return (
        VPolytope(verts),
        HPolytope(tuple(rows)).normalized(),
        IncidenceStructure(d, len(verts), facets),
    )


def h_to_v(P: HPolytope) -> VPolytope:
    return VPolytope(tuple(vertices_of_rows(P.rows, P.dim)))


def realize(P: HPolytope):
    """(V, H, incidence) for an H-polytope; redundant rows are dropped."""
    V = h_to_v(P)
    inc_rows = [
        (a, b) for a, b in P.rows
        if la.affine_rank([v for v in V.vertices if la.dot(a, v) == b]) == P.dim - 1
    ]
    H = HPolytope(tuple(inc_rows))
    return V, H, incidence(V, H)


def polar_dual(P: HPolytope) -> VPolytope:
    """conv(a_i / b_i) for an H-polytope with the origin strictly inside."""
    for j, (_, b) in enumerate(P.rows):
        if b <= 0:
            raise OriginNotInteriorError(f"row {j} has offset {b} <= 0")
    vertices_of_rows(P.rows, P.dim)  # raises on unbounded input
    return VPolytope(tuple(la.scale(1 / b, a) for a, b in P.rows))


def polar_dual_v(P: VPolytope) -> HPolytope:
    """Rows <v, x> <= 1 for the vertices of P (origin strictly inside)."""
    rows = hull_facets(P.vertices)
    if any(b <= 0 for _, b in rows):
        raise OriginNotInteriorError("origin is not strictly inside conv(vertices)")
    V, _, _ = _assemble(list(P.vertices), rows)
    keep = set(V.vertices)
    return HPolytope(tuple((v, Fraction(1)) for v in P.vertices if v in keep))


def incidence(V: VPolytope, H: HPolytope) -> IncidenceStructure:
    facets = []
    for j, (a, b) in enumerate(H.rows):
        on = []
        for i, v in enumerate(V.vertices):
            s = la.dot(a, v)
            if s > b:
                raise RepresentationMismatchError(f"vertex {i} violates row {j}")
            if s == b:
                on.append(i)
        if not on:
            raise RepresentationMismatchError(f"row {j} is tight on no vertex")
        facets.append(frozenset(on))
    return IncidenceStructure(V.dim, len(V.vertices), tuple(facets))


# ---------------------------------------------------------------------------
# face counting
# ---------------------------------------------------------------------------


def face_sets(inc: IncidenceStructure) -> dict:
    """All nonempty proper faces (as vertex sets) mapped to their dimension."""
    facets = set(inc.facets)
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for F in frontier:
            for G in facets:
                I = F & G
                if I and I not in faces:
                    faces.add(I)
                    new.add(I)
        frontier = new
    for i in range(inc.n_vertices):
        if frozenset([i]) not in faces:
            raise DegenerateError(f"vertex {i} is not cut out by its facets")
    ordered = sorted(faces, key=len)
    dims: dict = {}
    for F in ordered:
        if len(F) == 1:
            dims[F] = 0
            continue
        sub = [dims[G] for G in ordered if len(G) < len(F) and G < F]
        dims[F] = 1 + max(sub)
    for F in inc.facets:
        if dims[F] != inc.dim - 1:
            raise DegenerateError("facet rank does not match the dimension")
    return dims


def f_vector_of(inc: IncidenceStructure):
    from .enumerative import FVector

    dims = face_sets(inc)
    counts = [0] * inc.dim
    for k in dims.values():
        counts[k] += 1
    return FVector(inc.dim, tuple(counts))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def verify_realization(V, candidate_facets: Sequence[Iterable[int]]) -> Certificate:
    """Certify that the candidate vertex sets are exactly the facets of conv(V).

    Raises :class:`CertificateError` naming the first failed check.
    """
    pts = V.vertices if isinstance(V, VPolytope) else tuple(la.vec(p) for p in V)
    d = len(pts[0])
    rows = []
    cands = [sorted(set(c)) for c in candidate_facets]
    for j, members in enumerate(cands):
        if len(members) < d:
            raise CertificateError("spans-hyperplane", f"candidate {j} has {len(members)} < {d} vertices")
        hp = la.hyperplane_through([pts[i] for i in members])
        if hp is None or la.affine_rank([pts[i] for i in members]) != d - 1:
            raise CertificateError("spans-hyperplane", f"candidate {j} is not a coplanar spanning set")
        a, b = hp
        member_set = set(members)
        sign = 0
        for i, p in enumerate(pts):
            if i in member_set:
                continue
            s = la.dot(a, p) - b
            if s == 0:
                raise CertificateError("strict-side", f"vertex {i} lies on the plane of candidate {j}")
            sg = 1 if s > 0 else -1
            if sign == 0:
                sign = sg
            elif sg != sign:
                raise CertificateError("strict-side", f"candidate {j} has vertices on both sides")
        if sign > 0:
            a, b = la.scale(-1, a), -b
        p = la.primitive(tuple(a) + (b,))
        rows.append((p[:-1], p[-1]))
    for i in range(len(pts)):
        deg = sum(1 for c in cands if i in c)
        if deg < d:
            raise CertificateError("vertex-degree", f"vertex {i} lies on {deg} < {d} candidates")
    if len(set(rows)) != len(rows):
        raise CertificateError("distinct-hyperplanes", "two candidates share a hyperplane")
    return Certificate(
        "valid-realization",
        ("spans-hyperplane", "strict-side", "vertex-degree", "distinct-hyperplanes"),
        {"facets": len(rows)},
    )


def cube_pairing(inc: IncidenceStructure) -> OppositePairing:
    """Opposite-facet pairing of a combinatorial cube, else NotACubeError."""
    d, n = inc.dim, inc.n_vertices
    if len(inc.facets) != 2 * d or n != 2 ** d:
        raise NotACubeError(f"{n} vertices / {len(inc.facets)} facets")
    everything = frozenset(range(n))
    index = {f: j for j, f in enumerate(inc.facets)}
    if len(index) != len(inc.facets):
        raise NotACubeError("repeated facet")
    pairs, used = [], set()
    for j, f in enumerate(inc.facets):
        if j in used:
            continue
        k = index.get(everything - f)
        if k is None or k == j:
            raise NotACubeError(f"facet {j} has no complementary facet")
        pairs.append((j, k))
        used.update((j, k))
    signs = set()
    for i in range(n):
        signs.add(tuple(i in inc.facets[j] for j, _ in pairs))
    if len(signs) != n:
        raise NotACubeError("vertex sign vectors are not distinct")
    return OppositePairing(tuple(pairs))


def crosspolytope_pairing(inc: IncidenceStructure) -> OppositePairing:
    """Antipodal-vertex pairing of a combinatorial crosspolytope."""
    d, n = inc.dim, inc.n_vertices
    if n != 2 * d or len(inc.facets) != 2 ** d:
        raise NotACrosspolytopeError(f"{n} vertices / {len(inc.facets)} facets")
    vf = [inc.vertex_facets(i) for i in range(n)]
    pairs, used = [], set()
    for i in range(n):
        if i in used:
            continue
        anti = [k for k in range(n) if k != i and not (vf[i] & vf[k])]
        if len(anti) != 1 or anti[0] in used:
            raise NotACrosspolytopeError(f"vertex {i} has no unique antipode")
        pairs.append((i, anti[0]))
        used.update((i, anti[0]))
    choices = set()
    for f in inc.facets:
        pick = []
        for a, b in pairs:
            if (a in f) == (b in f):
                raise NotACrosspolytopeError("facet does not pick one vertex per pair")
            pick.append(a in f)
        choices.add(tuple(pick))
    if len(choices) != len(inc.facets):
        raise NotACrosspolytopeError("facet choice vectors are not distinct")
    return OppositePairing(tuple(pairs))


def is_combinatorial_cube(inc: IncidenceStructure) -> bool:
    try:
        cube_pairing(inc)
    except NotACubeError:
        return False
    return True


def is_combinatorial_crosspolytope(inc: IncidenceStructure) -> bool:
    try:
        crosspolytope_pairing(inc)
    except NotACrosspolytopeError:
        return False
    return True


def certify_type(V: VPolytope, inc: IncidenceStructure, kind: str) -> Certificate:
    """Realization certificate plus combinatorial type check.

    ``kind`` is ``"combinatorial-cube"`` or ``"combinatorial-crosspolytope"``.
    """
    base = verify_realization(V, inc.facets)
    if kind == "combinatorial-cube":
        pairing = cube_pairing(inc)
    elif kind == "combinatorial-crosspolytope":
        pairing = crosspolytope_pairing(inc)
    else:
        raise ValueError(kind)
    return Certificate(
        kind,
        base.checks + ("canonical-pairing",),
        {**base.witness, "pairs": [list(p) for p in pairing.pairs]},
    )


def certify_cube(P: HPolytope) -> Certificate:
    V, H, inc = realize(P)
    if len(H.rows) != len(P.rows):
        raise CertificateError("irredundant", "a row is not facet-defining")
    try:
        return certify_type(V, inc, "combinatorial-cube")
    except NotACubeError as exc:
        raise CertificateError("combinatorial-cube", str(exc)) from exc


def certify_crosspolytope(V: VPolytope) -> Certificate:
    V2, _, inc = hull(V.vertices)
    if len(V2.vertices) != len(V.vertices):
        raise CertificateError("all-vertices", "some point is not a vertex")
    # facets in terms of the caller's vertex order
    pos = {v: i for i, v in enumerate(V.vertices)}
    facets = [frozenset(pos[V2.vertices[i]] for i in f) for f in inc.facets]
    inc = IncidenceStructure(inc.dim, len(V.vertices), tuple(facets))
    try:
        return certify_type(V, inc, "combinatorial-crosspolytope")
    except NotACrosspolytopeError as exc:
        raise CertificateError("combinatorial-crosspolytope", str(exc)) from exc


# ---------------------------------------------------------------------------
# standard shapes
# ---------------------------------------------------------------------------


def standard_cube(d: int, radius=1) -> HPolytope:
    """[-r, r]^d with rows ordered e_1, -e_1, e_2, -e_2, ..."""
    rows = []
    for i in range(d):
        for s in (1, -1):
            a = [0] * d
            a[i] = s
            rows.append((a, radius))
    return HPolytope(tuple(rows))


def standard_cube_vertices(d: int) -> VPolytope:
    return VPolytope(tuple(itertools.product((-1, 1), repeat=d)))


def standard_crosspolytope(d: int) -> VPolytope:
    """conv(+-e_i) ordered e_1, -e_1, e_2, -e_2, ..."""
    verts = []
    for i in range(d):
        for s in (1, -1):
            v = [0] * d
            v[i] = s
            verts.append(v)
    return VPolytope(tuple(verts))


def standard_simplex(d: int) -> VPolytope:
    verts = [[0] * d]
    for i in range(d):
        v = [0] * d
        v[i] = 1
        verts.append(v)
    return VPolytope(tuple(verts))
