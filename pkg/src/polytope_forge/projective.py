"""Projective, normal and ray transformations.

A projective map x -> (Ax + b) / (c.x + alpha) is stored as its homogeneous
block B = [[A, b], [c^T, alpha]], scaled so that the first nonzero entry is 1.
Composition is block multiplication, so two maps are equal iff their blocks are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _linalg as la
from ._linalg import Fraction
from .errors import (
    DegenerateError,
    FacetDegeneratedError,
    InadmissibleMapError,
    OriginNotInteriorError,
    SingularMapError,
    TypeChangeError,
    UnboundedError,
)
from .geometry import (
    Certificate,
    HPolytope,
    IncidenceStructure,
    VPolytope,
    hull,
    realize,
)
from .hull import hull_facets, vertices_of_rows


def _normalize_block(block) -> tuple:
    for row in block:
        for x in row:
            if x != 0:
                return tuple(tuple(y / x for y in r) for r in block)
    raise SingularMapError("zero block matrix")


@dataclass(frozen=True)
class ProjectiveMap:
    block: tuple

    def __post_init__(self):
        B = la.mat(self.block)
        n = len(B)
        if n < 2 or any(len(r) != n for r in B):
            raise ValueError("block must be square of size d+1 >= 2")
        if la.det(B) == 0:
            raise SingularMapError("block matrix is singular")
        object.__setattr__(self, "block", _normalize_block(B))

    @classmethod
    def from_parts(cls, A, b, c, alpha) -> "ProjectiveMap":
        A = la.mat(A)
        rows = [tuple(A[i]) + (la.frac(b[i]),) for i in range(len(A))]
        rows.append(tuple(la.vec(c)) + (la.frac(alpha),))
        return cls(tuple(rows))

    @classmethod
    def identity(cls, d: int) -> "ProjectiveMap":
        return cls(la.identity(d + 1))

    @classmethod
    def translation(cls, v) -> "ProjectiveMap":
        d = len(v)
        return cls.from_parts(la.identity(d), v, la.zeros(d), 1)

    @classmethod
    def linear(cls, M) -> "ProjectiveMap":
        d = len(M)
        return cls.from_parts(M, la.zeros(d), la.zeros(d), 1)

    @property
    def dim(self) -> int:
        return len(self.block) - 1

    @property
    def A(self):
        return tuple(r[:-1] for r in self.block[:-1])

    @property
    def b(self):
        return tuple(r[-1] for r in self.block[:-1])

    @property
    def c(self):
        return self.block[-1][:-1]

    @property
    def alpha(self):
        return self.block[-1][-1]

    @property
    def is_affine(self) -> bool:
        return all(x == 0 for x in self.c)

    def denominator(self, x) -> Fraction:
        return la.dot(self.c, x) + self.alpha

    def __call__(self, x):
        x = la.vec(x)
        den = self.denominator(x)
        if den == 0:
            raise InadmissibleMapError(f"point {x} is sent to infinity")
        y = la.matvec(self.block, tuple(x) + (Fraction(1),))
        return tuple(v / den for v in y[:-1])

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """self after other."""
        return ProjectiveMap(la.matmul(self.block, other.block))

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(la.inverse(self.block))

    def is_identity(self) -> bool:
        return self == ProjectiveMap.identity(self.dim)


def compose(*maps: ProjectiveMap) -> ProjectiveMap:
    """compose(f, g, h) = f o g o h."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m.compose(out)
    return out


def inverse(phi: ProjectiveMap) -> ProjectiveMap:
    return phi.inverse()


def _J(B):
    n = len(B)
    return tuple(
        tuple(B[i][j] * (-1 if (i == n - 1) != (j == n - 1) else 1) for j in range(n))
        for i in range(n)
    )


def dual_map(phi: ProjectiveMap) -> ProjectiveMap:
    """x -> (A^T x - c) / (-b^T x + alpha); block J B^T J with J = diag(I, -1).

    If Q = phi(P), the inverse of the returned map sends polar(P) to polar(Q).
    """
    return ProjectiveMap(_J(la.transpose(phi.block)))


def primal_of_polar(L: ProjectiveMap) -> ProjectiveMap:
    """The map phi on the primal side whose effect on polars is L."""
    return dual_map(L.inverse())


def check_admissible(phi: ProjectiveMap, points: Sequence) -> int:
    """Sign of the denominator on ``points``; raises if it vanishes or changes."""
    sign = 0
    for i, p in enumerate(points):
        den = phi.denominator(p)
        if den == 0:
            raise InadmissibleMapError(f"denominator vanishes at vertex {i}")
        s = 1 if den > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            raise InadmissibleMapError("denominator changes sign on the polytope")
    return sign


def apply_projective(phi: ProjectiveMap, P: VPolytope) -> VPolytope:
    if phi.dim != P.dim:
        raise ValueError("dimension mismatch")
    check_admissible(phi, P.vertices)
    return VPolytope(tuple(phi(v) for v in P.vertices))


def apply_projective_h(phi: ProjectiveMap, P: HPolytope, vertices: Sequence | None = None) -> HPolytope:
    """Image of an H-polytope; rows keep their order.

    A row (a, beta) is the covector (a, -beta) on homogeneous points and maps
    to (a, -beta) B^-1, with the sign fixed by the denominator sign on P.
    """
    if vertices is None:
        vertices = vertices_of_rows(P.rows, P.dim)
    sign = check_admissible(phi, vertices)
    Binv = la.inverse(phi.block)
    rows = []
    for a, beta in P.rows:
        cov = tuple(a) + (-beta,)
        n = tuple(sum(cov[k] * Binv[k][j] for k in range(len(cov))) for j in range(len(cov)))
        if sign < 0:
            n = tuple(-x for x in n)
        rows.append((n[:-1], -n[-1]))
    return HPolytope(tuple(rows)).normalized()


def origin_shift(polar: VPolytope, v) -> tuple[ProjectiveMap, VPolytope]:
    """Translate a polar vertex set by v and return the primal map realizing it.

    The primal map is (A=I, b=0, c=v, alpha=1). It is admissible on the primal
    polytope iff the shifted polar still has the origin strictly inside,
    that is, iff -v is interior to the given polar.
    """
    v = la.vec(v)
    shifted = tuple(la.add(p, v) for p in polar.vertices)
    rows = hull_facets(shifted)
    if any(b <= 0 for _, b in rows):
        raise OriginNotInteriorError(f"-{v} is not interior to the polar")
    d = len(v)
    phi = ProjectiveMap.from_parts(la.identity(d), la.zeros(d), v, 1)
    return phi, VPolytope(shifted)


@dataclass(frozen=True)
class RayScaling:
    lambdas: tuple

    def __post_init__(self):
        lam = tuple(la.frac(x) for x in self.lambdas)
        if any(x <= 0 for x in lam):
            raise ValueError("ray scalars must be positive")
        object.__setattr__(self, "lambdas", lam)

    def is_identity(self) -> bool:
        return all(x == 1 for x in self.lambdas)


@dataclass(frozen=True)
class NormalTransform:
    new_offsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "new_offsets", tuple(la.frac(x) for x in self.new_offsets))

    def then(self, other: "NormalTransform") -> "NormalTransform":
        """Two offset replacements in a row are the second one."""
        if len(other.new_offsets) != len(self.new_offsets):
            raise ValueError("row count mismatch")
        return other


def _labelled_facets(V: VPolytope) -> tuple[VPolytope, IncidenceStructure]:
    V2, _, inc = hull(V.vertices)
    if len(V2.vertices) != len(V.vertices):
        raise DegenerateError("some point is not a vertex")
    pos = {p: i for i, p in enumerate(V.vertices)}
    facets = tuple(frozenset(pos[V2.vertices[i]] for i in f) for f in inc.facets)
    return V, IncidenceStructure(inc.dim, len(V.vertices), facets)


def ray_scale(P: VPolytope, s: RayScaling) -> tuple[VPolytope, Certificate]:
    """Scale vertex i by lambda_i and certify that the incidence is unchanged."""
    if len(s.lambdas) != len(P.vertices):
        raise ValueError("one scalar per vertex is required")
    rows = hull_facets(P.vertices)
    if any(b <= 0 for _, b in rows):
        raise OriginNotInteriorError("origin is not strictly inside P")
    before = set(_labelled_facets(P)[1].facets)
    Q = VPolytope(tuple(la.scale(l, v) for l, v in zip(s.lambdas, P.vertices)))
    try:
        after = set(_labelled_facets(Q)[1].facets)
    except DegenerateError as exc:
        raise TypeChangeError(str(exc)) from exc
    if before != after:
        raise TypeChangeError("incidence structure changed under ray scaling")
    return Q, Certificate("ray-equivalent", ("all-vertices", "same-incidence"), {"facets": len(after)})


def normal_transform(P: HPolytope, t: NormalTransform) -> tuple[HPolytope, Certificate]:
    """Replace offsets keeping normals; every row must stay facet-defining."""
    if len(t.new_offsets) != len(P.rows):
        raise ValueError("one offset per row is required")
    Q = HPolytope(tuple((a, b) for (a, _), b in zip(P.rows, t.new_offsets)))
    try:
        V, H, _ = realize(Q)
    except DegenerateError as exc:
        raise FacetDegeneratedError(str(exc)) from exc
    except UnboundedError:
        raise
    if len(H.rows) != len(Q.rows):
        raise FacetDegeneratedError("a row is no longer facet-defining")
    planes = {la.primitive(tuple(a) + (b,)) for a, b in Q.rows}
    if len(planes) != len(Q.rows):
        raise FacetDegeneratedError("two rows define the same facet")
    return Q, Certificate("normal-equivalent", ("bounded", "facet-defining"), {"vertices": len(V.vertices)})


def offsets_for_normals(normals: Sequence, vertices: Sequence) -> tuple:
    """Support values max_v <a, v> for each normal."""
    return tuple(max(la.dot(a, v) for v in vertices) for a in normals)
