"""Prisms over normally equivalent cubes, certified gluing, towers and
connected sums with a cubical connector.

A *chart* is a (d+1) x d homogeneous matrix W describing a projective map from
R^(d-1) onto a hyperplane of R^d, y -> W (y, 1). Charts record how a facet
is parametrized, so two facets can be glued vertex by vertex without
solving a projective-equivalence problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _linalg as la
from ._linalg import Fraction
from .errors import (
    CertificateError,
    InadmissibleMapError,
    NotACubeError,
    SearchExhaustedError,
    SingularMapError,
)
from .geometry import (
    Certificate,
    HPolytope,
    IncidenceStructure,
    VPolytope,
    certify_cube,
    face_sets,
    hull,
    incidence,
    realize,
    verify_realization,
)
from .normalizer import PROJECTIVE, normal_rows, relate_cubes
from .projective import ProjectiveMap, apply_projective_h, check_admissible

DEFAULT_FLOOR = Fraction(1, 2**4096)
WIDTHS = (Fraction(1, 2), Fraction(1, 16), Fraction(1, 256))


@dataclass(frozen=True)
class Realized:
    V: VPolytope
    H: HPolytope
    inc: IncidenceStructure

    @classmethod
    def of(cls, P) -> "Realized":
        if isinstance(P, Realized):
            return P
        if isinstance(P, HPolytope):
            V, H, inc = realize(P)
        else:
            V, H, inc = hull(P.vertices if isinstance(P, VPolytope) else P)
        return cls(V, H.normalized(), incidence(V, H.normalized()))

    @property
    def dim(self) -> int:
        return self.V.dim

    def facet_vertices(self, j: int) -> tuple:
        return tuple(self.V.vertices[i] for i in sorted(self.inc.facets[j]))

    def row_index(self, row) -> int:
        a, b = row
        p = la.primitive(tuple(a) + (b,))
        for j, (a2, b2) in enumerate(self.H.rows):
            if la.primitive(tuple(a2) + (b2,)) == p:
                return j
        raise KeyError("row not found")


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


def chart_apply(W, y):
    h = la.matvec(W, tuple(y) + (Fraction(1),))
    if h[-1] == 0:
        raise InadmissibleMapError("chart sends a point to infinity")
    return tuple(x / h[-1] for x in h[:-1])


def _chart_signed(W, params):
    """W scaled so the homogeneous coordinate is positive on ``params``."""
    signs = set()
    for y in params:
        w = la.dot(W[-1], tuple(y) + (Fraction(1),))
        if w == 0:
            raise InadmissibleMapError("chart is not admissible on the facet")
        signs.add(w > 0)
    if len(signs) != 1:
        raise InadmissibleMapError("chart denominator changes sign on the facet")
    if signs == {False}:
        return tuple(tuple(-x for x in r) for r in W)
    return W


def embed_chart(d: int, height=0):
    """y -> (y, height) from R^(d-1) into R^d."""
    rows = []
    for i in range(d - 1):
        rows.append(tuple(Fraction(int(i == j)) for j in range(d)))
    rows.append(tuple(Fraction(0) for _ in range(d - 1)) + (Fraction(height),))
    rows.append(tuple(Fraction(0) for _ in range(d - 1)) + (Fraction(1),))
    return tuple(rows)


def chart_after(W, phi: ProjectiveMap):
    """Chart y -> W(phi(y))."""
    return la.matmul(W, phi.block)


def _extend(W, n) -> tuple:
    """Square block [W's first d-1 columns, (n, 0), W's last column]."""
    d = len(W) - 1
    cols = la.transpose(W)
    ncol = tuple(n) + (Fraction(0),)
    return la.transpose(tuple(cols[: d - 1]) + (ncol, cols[d - 1]))


def facet_chart(R: Realized, j: int):
    """Affine chart of facet j: origin at its first vertex, basis from the
    normal's orthogonal complement. Returns (chart, parameter vertices)."""
    verts = R.facet_vertices(j)
    a, _ = R.H.rows[j]
    d = R.dim
    basis = la.nullspace([a], d)
    o = verts[0]
    W = tuple(
        tuple(basis[k][i] for k in range(d - 1)) + (o[i],) for i in range(d)
    ) + (tuple(Fraction(0) for _ in range(d - 1)) + (Fraction(1),),)
    params = []
    for v in verts:
        rhs = la.sub(v, o)
        sol = la.nullspace(
            [tuple(basis[k][i] for k in range(d - 1)) + (-rhs[i],) for i in range(d)], d
        )
        sol = [s for s in sol if s[-1] != 0][0]
        params.append(tuple(x / sol[-1] for x in sol[:-1]))
    return W, params


# ---------------------------------------------------------------------------
# prisms and gluing
# ---------------------------------------------------------------------------


def prism_lift(Q1: HPolytope, Q2: HPolytope) -> HPolytope:
    """d-cube with Q1 at height 0 and Q2 at height 1.

    Rows: (A, b1 - b2) x <= b1, then h <= 1 and -h <= 0.
    """
    if Q1.dim != Q2.dim or len(Q1.rows) != len(Q2.rows):
        raise NotACubeError("not normally equivalent: shapes differ")
    A1 = normal_rows(Q1)
    A2 = normal_rows(Q2)
    if A1.normals != A2.normals:
        raise NotACubeError("not normally equivalent: normals differ")
    n = Q1.dim
    rows = [
        (tuple(a) + (b1 - b2,), b1) for a, b1, b2 in zip(A1.normals, A1.offsets, A2.offsets)
    ]
    rows.append((tuple(Fraction(0) for _ in range(n)) + (Fraction(1),), Fraction(1)))
    rows.append((tuple(Fraction(0) for _ in range(n)) + (Fraction(-1),), Fraction(0)))
    P = HPolytope(tuple(rows))
    try:
        certify_cube(P)
    except CertificateError as exc:
        raise NotACubeError(f"prism is not a cube: {exc}") from exc
    return P


@dataclass
class GlueResult:
    polytope: Realized
    map_used: ProjectiveMap
    shared_facet: tuple
    certificate: Certificate
    parameter: Fraction
    image: Realized = field(repr=False, default=None)


def flattening(d: int, t: Fraction, center, h_max: Fraction, width: Fraction = Fraction(1, 2)) -> ProjectiveMap:
    """Projective map fixing {h = 0} pointwise. Height h_max goes to t h_max
    and that level is shrunk by ``width`` toward ``center``.

    Block [[I, kappa c, 0], [0, t / width, 0], [0, kappa, 1]] with
    kappa = (1 / width - 1) / h_max.
    """
    kappa = (1 / width - 1) / h_max
    rows = []
    for i in range(d - 1):
        rows.append(tuple(Fraction(int(i == j)) for j in range(d - 1)) + (kappa * center[i], Fraction(0)))
    rows.append(tuple(Fraction(0) for _ in range(d - 1)) + (t / width, Fraction(0)))
    rows.append(tuple(Fraction(0) for _ in range(d - 1)) + (kappa, Fraction(1)))
    return ProjectiveMap(tuple(rows))


def convex_union_certificate(P: Realized, jp: int, Q: Realized, jq: int) -> Certificate:
    """Exact check that P and Q meet in the shared facet and P u Q is convex.

    Vertices off the shared facet must satisfy all of the other side's facet
    inequalities strictly, except the shared one, which they must violate.
    """
    FP = {P.V.vertices[i] for i in P.inc.facets[jp]}
    FQ = {Q.V.vertices[i] for i in Q.inc.facets[jq]}
    if FP != FQ:
        raise CertificateError("shared-facet", "facet vertex sets differ")
    for (X, jx), (Y, jy) in (((P, jp), (Q, jq)), ((Q, jq), (P, jp))):
        for v in Y.V.vertices:
            if v in FP:
                continue
            for j, (a, b) in enumerate(X.H.rows):
                s = la.dot(a, v)
                if j == jx:
                    if s <= b:
                        raise CertificateError("beyond-shared", "vertex is not beyond the shared facet")
                elif s >= b:
                    raise CertificateError("strict-inequalities", f"vertex violates facet {j}")
    return Certificate("convex-union", ("shared-facet", "beyond-shared", "strict-inequalities"))


def _union(P: Realized, jp: int, Q: Realized, jq: int) -> Realized:
    verts = list(P.V.vertices)
    seen = set(verts)
    for v in Q.V.vertices:
        if v not in seen:
            verts.append(v)
            seen.add(v)
    rows = [r for j, r in enumerate(P.H.rows) if j != jp] + [r for j, r in enumerate(Q.H.rows) if j != jq]
    V = VPolytope(tuple(verts))
    H = HPolytope(tuple(rows))
    inc = incidence(V, H)
    verify_realization(V, inc.facets)
    return Realized(V, H, inc)


def face_identity(R: Realized, P: Realized, jp: int, Q: Realized) -> bool:
    """faces(R) = faces(P) u faces(Q) minus the shared facet, as vertex sets."""
    def named(X):
        return {frozenset(X.V.vertices[i] for i in F) for F in face_sets(X.inc)}
    shared = frozenset(P.V.vertices[i] for i in P.inc.facets[jp])
    return named(R) == (named(P) | named(Q)) - {shared}


def _pow2_near(x) -> Fraction:
    k = x.numerator.bit_length() - x.denominator.bit_length()
    return Fraction(2) ** k


def _scaled_normal(n, W, params, bits: int = 24):
    # any outward transversal direction extends the chart; a short dyadic
    # approximation of the normal keeps later charts from doubling in size.
    # It is scaled to the facet size and the chart's homogeneous scale.
    ws = [la.dot(W[-1], tuple(y) + (Fraction(1),)) for y in params]
    pts = [chart_apply(W, y) for y in params]
    diam = max(sum(abs(a - b) for a, b in zip(p, pts[0])) for p in pts)
    top = max(abs(x) for x in n)
    unit = _pow2_near(top) / 2**bits
    approx = tuple(Fraction(round(x / unit)) for x in n)
    if la.dot(approx, n) <= 0:
        approx = n
    f = _pow2_near(sum(ws) / len(ws) * diam / sum(abs(x) for x in approx))
    return tuple(f * x for x in approx)


def glue(P, jp: int, Q, jq: int, chart_p, chart_q, params, floor: Fraction = DEFAULT_FLOOR,
         check_faces: bool = True, widths=WIDTHS) -> GlueResult:
    """Glue Q onto facet jp of P along facet jq of Q.

    ``chart_p`` and ``chart_q`` parametrize the two facets by the same
    (d-1)-dimensional vertex list ``params`` (this is the correspondence).
    ``chart_q`` must be affine. Q is moved by Ext(chart_p) o F_s o
    Ext(chart_q)^-1 with s = 2^-k, the smallest k found by doubling then bisection.
    """
    P, Q = Realized.of(P), Realized.of(Q)
    d = P.dim
    chart_p = _chart_signed(chart_p, params)
    chart_q = _chart_signed(chart_q, params)
    n_out = _scaled_normal(P.H.rows[jp][0], chart_p, params)
    n_in = tuple(-x for x in Q.H.rows[jq][0])
    to_std = ProjectiveMap(_extend(chart_q, n_in)).inverse()
    from_std = ProjectiveMap(_extend(chart_p, n_out))
    std_verts = [to_std(v) for v in Q.V.vertices]
    h_max = max(v[-1] for v in std_verts)
    center = la.centroid(params)
    last = None

    def attempt(k, width):
        nonlocal last
        s = Fraction(1, 2**k)
        try:
            G = from_std.compose(flattening(d, s, center, h_max, width)).compose(to_std)
            check_admissible(G, Q.V.vertices)
            img_V = VPolytope(tuple(G(v) for v in Q.V.vertices))
            img_H = apply_projective_h(G, Q.H, Q.V.vertices)
            img = Realized(img_V, img_H, incidence(img_V, img_H))
            cert = convex_union_certificate(P, jp, img, jq)
        except (CertificateError, InadmissibleMapError, SingularMapError) as exc:
            last = exc
            return None
        return s, G, img, cert

    max_k = floor.denominator.bit_length() - floor.numerator.bit_length()
    found = None
    for width in widths:
        # height factor s = 2^-k; k doubles until a certificate passes, then bisect on k
        found = attempt(0, width)
        lo, hi = 0, None
        k = 1
        while found is None and k <= max_k:
            found = attempt(k, width)
            if found is None:
                lo = k
                k *= 2
            else:
                hi = k
        if found is not None and hi is not None:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                got = attempt(mid, width)
                if got is None:
                    lo = mid
                else:
                    hi, found = mid, got
        if found is not None:
            break
    if found is not None:
        s, G, img, cert = found
        R = _union(P, jp, img, jq)
        checks = cert.checks
        if check_faces:
            if not face_identity(R, P, jp, img):
                raise CertificateError("face-identity", "faces of the union do not match")
            checks = checks + ("face-identity",)
        return GlueResult(
            R, G, P.facet_vertices(jp),
            Certificate("convex-union", checks, {"parameter": f"{s.numerator}/{s.denominator}"}),
            s, img,
        )
    raise SearchExhaustedError(f"no certified gluing with height factor >= 2^-{max_k}: {last}")


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------


@dataclass
class Tower:
    polytope: Realized
    cube_count: int
    bottom_facet: int
    top_facet: int
    bottom_witness: tuple  # chart sending the vertices of Q onto the bottom facet
    top_witness: tuple  # chart sending the vertices of Q' onto the top facet
    parameters: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def check_witnesses(self, Q: HPolytope, Q2: HPolytope) -> bool:
        ok = True
        for W, X, j in ((self.bottom_witness, Q, self.bottom_facet), (self.top_witness, Q2, self.top_facet)):
            verts = realize(X)[0].vertices
            image = {chart_apply(W, y) for y in verts}
            ok = ok and image == set(self.polytope.facet_vertices(j))
        return ok


def build_tower(Q: HPolytope, Q2: HPolytope, pad_to: int | None = None, check_faces: bool = True) -> Tower:
    """Stack of prisms realizing the normal steps of relate_cubes(Q, Q2).

    Projective steps only change the chart of the current top facet. With
    ``pad_to`` the stack is topped up with right prisms to exactly that many
    cubes (used for fixed-size connectors).
    """
    n = Q.dim
    d = n + 1
    log = relate_cubes(Q, Q2)
    C = log.initial
    lead = ProjectiveMap.identity(n)
    chart = None  # chart of the current top facet, in terms of C's coordinates
    stack = None
    bottom_row = None
    params_list, certs = [], []
    bottom_witness = None
    count = 0

    def add_prism(C_old, C_new):
        nonlocal stack, chart, bottom_row, bottom_witness, count
        prism = Realized.of(prism_lift(C_old, C_new))
        verts_old = realize(C_old)[0].vertices
        if stack is None:
            stack = prism
            bottom_row = prism.H.rows[-1]
            bottom_witness = chart_after(embed_chart(d, 0), lead)
        else:
            jp = stack.row_index(top_row())
            jq = prism.row_index(((Fraction(0),) * n + (Fraction(-1),), Fraction(0)))
            res = glue(stack, jp, prism, jq, chart, embed_chart(d, 0), verts_old, check_faces=check_faces)
            params_list.append(res.parameter)
            certs.append(res.certificate)
            stack = res.polytope
            G = res.map_used
            chart = la.matmul(G.block, embed_chart(d, 1))
            count += 1
            return
        chart = embed_chart(d, 1)
        count += 1

    top_state = {}

    def top_row():
        return top_state["row"]

    def refresh_top(C_new):
        verts = {chart_apply(chart, y) for y in realize(C_new)[0].vertices}
        for j, F in enumerate(stack.inc.facets):
            if {stack.V.vertices[i] for i in F} == verts:
                top_state["row"] = stack.H.rows[j]
                return
        raise CertificateError("top-facet", "top facet not found")

    for e in log.entries:
        if e.tag == PROJECTIVE:
            phi = e.payload
            if stack is None:
                lead = phi.compose(lead)
            else:
                chart = chart_after(chart, phi.inverse())
            C = normal_rows(apply_projective_h(phi, C))
        else:
            C_new = HPolytope(tuple((a, b) for a, b in zip(C.normals, e.payload.new_offsets)))
            add_prism(C, C_new)
            C = C_new
            refresh_top(C)
    target = pad_to if pad_to is not None else 1
    while count < target:
        add_prism(C, C)
        refresh_top(C)
    if pad_to is not None and count > pad_to:
        raise CertificateError("pad", f"tower already has {count} > {pad_to} cubes")
    if stack is None:
        raise CertificateError("tower", "empty tower")
    jb = stack.row_index(bottom_row)
    jt = stack.row_index(top_row())
    tower = Tower(stack, count, jb, jt, bottom_witness, chart, params_list, certs)
    # the log starts from the irredundant rows of Q and ends at Q2 as a set
    if not tower.check_witnesses(Q, Q2):
        raise CertificateError("witness", "witness maps do not reproduce the inputs")
    return tower


def tower_is_cubical(T: Tower) -> bool:
    return _all_facets_cubes(T.polytope)


def _all_facets_cubes(R: Realized) -> bool:
    from .geometry import is_combinatorial_cube

    d = R.dim
    faces = face_sets(R.inc)
    for F, k in faces.items():
        if k == d - 1:
            sub = [G for G, kg in faces.items() if kg == d - 2 and G < F]
            verts = sorted(F)
            pos = {v: i for i, v in enumerate(verts)}
            inc = IncidenceStructure(d - 1, len(verts), tuple(frozenset(pos[v] for v in G) for G in sub))
            if d - 1 == 1:
                if len(verts) != 2:
                    return False
                continue
            if not is_combinatorial_cube(inc):
                return False
    return True


# ---------------------------------------------------------------------------
# connected sum through a connector
# ---------------------------------------------------------------------------


def c_connected_sum(Q1, F1: int, Q2, F2: int, connector_cubes: int | None = None, check_faces: bool = True):
    """Q1 #_F1 C #_F2 Q2 with C a tower between the two facets.

    Returns (Realized polytope, provenance dict).
    """
    R1, R2 = Realized.of(Q1), Realized.of(Q2)
    W1, Y1 = facet_chart(R1, F1)
    W2, Y2 = facet_chart(R2, F2)
    C1 = realize_params(Y1)
    C2 = realize_params(Y2)
    T = build_tower(C1, C2, pad_to=connector_cubes, check_faces=check_faces)
    # parameters of the facets in the order realize() gives them
    Y1r = realize(C1)[0].vertices
    Y2r = realize(C2)[0].vertices
    g1 = glue(T.polytope, T.bottom_facet, R1, F1, T.bottom_witness, W1, Y1r, check_faces=check_faces)
    top_verts = {chart_apply(T.top_witness, y) for y in Y2r}
    S = g1.polytope
    jt = next(j for j, F in enumerate(S.inc.facets) if {S.V.vertices[i] for i in F} == top_verts)
    g2 = glue(S, jt, R2, F2, T.top_witness, W2, Y2r, check_faces=check_faces)
    prov = {
        "connector_cubes": T.cube_count,
        "tower_parameters": [f"{p.numerator}/{p.denominator}" for p in T.parameters],
        "glue_parameters": [f"{g.parameter.numerator}/{g.parameter.denominator}" for g in (g1, g2)],
    }
    return g2.polytope, prov


def realize_params(points) -> HPolytope:
    _, H, _ = hull(points)
    return H
