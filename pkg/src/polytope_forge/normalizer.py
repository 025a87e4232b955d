"""Normalization of combinatorial cubes by projective and normal transformations.

Work happens on the polar crosspolytope. Each antipodal pair i gets four steps:

1. shift the origin to the midpoint of the diagonal l_i;
2. push p_a outward to (c + 1) p_a, c being the separation threshold;
3. shift the origin to (c + 7/10) p_a;
4. ray-scale every other vertex onto the hyperplane H_i, which is orthogonal
   to l_i and meets the ray of p_a at (c + 1/2) p_a.

After d iterations the diagonals are pairwise orthogonal and concurrent. A
translation with a rational frame map plus one ray scaling then give exactly
conv(+-e_i). On the cube side, origin shifts become projective maps (through
:func:`primal_of_polar`) and ray scalings become normal transformations.

Cube logs keep rows with primitive integer normals and rational offsets, so
a normal transformation never changes the stored normals.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from . import _linalg as la
from ._linalg import Fraction
from .errors import (
    BoundViolationError,
    CertificateError,
    DegenerateError,
    NotACrosspolytopeError,
    NotACubeError,
    OriginNotInteriorError,
)
from .geometry import (
    Certificate,
    HPolytope,
    OppositePairing,
    VPolytope,
    certify_crosspolytope,
    certify_cube,
    crosspolytope_pairing,
    cube_pairing,
    hull,
    realize,
    standard_cube,
)
from .hull import hull_facets
from .projective import (
    NormalTransform,
    ProjectiveMap,
    RayScaling,
    apply_projective,
    apply_projective_h,
    normal_transform,
    origin_shift,
    primal_of_polar,
    ray_scale,
)

PROJECTIVE, NORMAL, RAY = "projective", "normal", "ray"
HALF = Fraction(1, 2)
SEVEN_TENTHS = Fraction(7, 10)


# ---------------------------------------------------------------------------
# logs
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def polytope_payload(P) -> dict:
    if isinstance(P, VPolytope):
        return {"vertices": [[_fmt(x) for x in v] for v in P.vertices]}
    return {"rows": [[_fmt(x) for x in a] + [_fmt(b)] for a, b in P.rows]}


def snapshot_id(P) -> str:
    blob = json.dumps(polytope_payload(P), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class LogEntry:
    tag: str
    payload: object
    certificate: Certificate
    snapshot_id: str
    label: str = ""


@dataclass
class TransformLog:
    """Ordered transformations acting on ``initial``.

    ``side`` is "polar" (V-polytopes; projective and ray steps) or "cube"
    (H-polytopes; projective and normal steps).
    """

    side: str
    initial: object
    entries: list
    final: object
    bound: int | None = None
    snapshots: list | None = None

    def __len__(self):
        return len(self.entries)

    def tags(self) -> list:
        return [e.tag for e in self.entries]

    def check_bound(self):
        if self.bound is not None and len(self.entries) > self.bound:
            raise BoundViolationError(
                f"log has {len(self.entries)} entries, bound is {self.bound}", len(self.entries)
            )


def normal_rows(P: HPolytope) -> HPolytope:
    """Rows rescaled so each normal is a primitive integer vector."""
    out = []
    for a, b in P.rows:
        p = la.primitive(a)
        k = next(i for i, x in enumerate(a) if x != 0)
        mu = Fraction(p[k]) / a[k]
        out.append((p, b * mu))
    return HPolytope(tuple(out))


def apply_step(tag: str, payload, P, side: str):
    """One transformation with its certificate: (new polytope, Certificate)."""
    if side == "polar":
        if tag == PROJECTIVE:
            Q = apply_projective(payload, P)
            step = Certificate("admissible", ("denominator-sign",))
        elif tag == RAY:
            Q, step = ray_scale(P, payload)
        else:
            raise ValueError(f"tag {tag!r} not valid on the polar side")
        kind = certify_crosspolytope(Q)
    else:
        if tag == PROJECTIVE:
            Q = normal_rows(apply_projective_h(payload, P))
            step = Certificate("admissible", ("denominator-sign",))
        elif tag == NORMAL:
            Q, step = normal_transform(P, payload)
        else:
            raise ValueError(f"tag {tag!r} not valid on the cube side")
        kind = certify_cube(Q)
    cert = Certificate(kind.kind, step.checks + kind.checks, {**step.witness, **kind.witness})
    return Q, cert


def replay(log: TransformLog, start=None):
    """Apply the entries in order; every step re-certifies. Returns the end state."""
    P = log.initial if start is None else start
    for e in log.entries:
        P, _ = apply_step(e.tag, e.payload, P, log.side)
    return P


def verify_log(log: TransformLog) -> bool:
    """Exact replay equality with the stored final polytope, plus the bound."""
    log.check_bound()
    end = replay(log)
    if log.side == "polar":
        return end.vertices == log.final.vertices
    return end.rows == log.final.rows


def _build(side: str, initial, steps, bound=None, keep_snapshots=False, labels=None) -> TransformLog:
    P = initial
    entries, snaps = [], [] if keep_snapshots else None
    for k, (tag, payload) in enumerate(steps):
        P, cert = apply_step(tag, payload, P, side)
        label = labels[k] if labels else ""
        entries.append(LogEntry(tag, payload, cert, snapshot_id(P), label))
        if keep_snapshots:
            snaps.append(P)
    return TransformLog(side, initial, entries, P, bound, snaps)


# ---------------------------------------------------------------------------
# the iteration on the polar crosspolytope
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IterationState:
    crosspolytope: VPolytope
    pairing: OppositePairing
    # (direction u_k of l_k, (normal, offset) of H_k) for completed axes
    completed_axes: tuple = ()

    def diagonal(self, i: int):
        a, b = self.pairing.pairs[i]
        V = self.crosspolytope.vertices
        return V[a], V[b]

    def translated(self, P: VPolytope, v) -> "IterationState":
        axes = tuple((u, (n, h + la.dot(n, v))) for u, (n, h) in self.completed_axes)
        return IterationState(P, self.pairing, axes)

    def with_polytope(self, P: VPolytope) -> "IterationState":
        return IterationState(P, self.pairing, self.completed_axes)


def separation_threshold(state: IterationState, i: int) -> Fraction:
    """c = max(1, max_{j != a} <u, p_j> / <u, p_a>) for pair i (0-based).

    The origin must already sit at the midpoint of l_i, and u = p_a - p_b.
    With the polar written as rows <p_j, y> <= 1, the lower limit 1/b is 1.
    """
    pa, pb = state.diagonal(i)
    u = la.sub(pa, pb)
    if all(x == 0 for x in u):
        raise DegenerateError("degenerate segment")
    base = la.dot(u, pa)
    a = state.pairing.pairs[i][0]
    best = Fraction(1)
    for j, p in enumerate(state.crosspolytope.vertices):
        if j != a:
            best = max(best, la.dot(u, p) / base)
    return best


def flatten_onto_hyperplane(state: IterationState, i: int, normal, level) -> RayScaling:
    """Scalars moving every vertex outside pair i along its ray onto <normal, x> = level."""
    a, b = state.pairing.pairs[i]
    lam = []
    for j, p in enumerate(state.crosspolytope.vertices):
        if j in (a, b):
            lam.append(Fraction(1))
            continue
        s = la.dot(normal, p)
        if s == 0:
            raise CertificateError("ray-meets-hyperplane", f"ray of vertex {j} is parallel to H")
        lam.append(level / s)
    return RayScaling(tuple(lam))


def _persistence(state: IterationState) -> None:
    V = state.crosspolytope.vertices
    pairs = state.pairing.pairs
    for k, (u, (n, h)) in enumerate(state.completed_axes):
        for j, (a, b) in enumerate(pairs):
            pa, pb = V[a], V[b]
            if j == k:
                w = la.sub(pa, pb)
                if la.rank([w, n]) != 1:
                    raise CertificateError("orthogonal-to-H", f"l_{j + 1} is not orthogonal to H_{k + 1}")
            elif la.dot(n, pa) != h or la.dot(n, pb) != h:
                raise CertificateError("persistence", f"l_{j + 1} left H_{k + 1}")


def _check_input(P: VPolytope, pairing: OppositePairing):
    try:
        certify_crosspolytope(P)
    except CertificateError as exc:
        raise NotACrosspolytopeError(str(exc)) from exc
    rows = hull_facets(P.vertices)
    if any(b <= 0 for _, b in rows):
        raise OriginNotInteriorError("origin is not strictly inside the crosspolytope")
    V2, _, inc = hull(P.vertices)
    pos = {v: i for i, v in enumerate(P.vertices)}
    relabel = [pos[v] for v in V2.vertices]
    true_pairs = {frozenset((relabel[x], relabel[y])) for x, y in crosspolytope_pairing(inc).pairs}
    if {frozenset(p) for p in pairing.pairs} != true_pairs:
        raise NotACrosspolytopeError("pairing does not match the antipodal vertices")


def _iteration_steps(state: IterationState, i: int):
    """The four (tag, payload, new_state, label) steps of iteration i."""
    out = []
    n = i + 1
    # (1) origin to the midpoint of l_i
    pa, pb = state.diagonal(i)
    mid = la.scale(HALF, la.add(pa, pb))
    minus_mid = la.scale(-1, mid)
    origin_shift(state.crosspolytope, minus_mid)
    L1 = ProjectiveMap.translation(minus_mid)
    P1 = apply_projective(L1, state.crosspolytope)
    state = state.translated(P1, minus_mid)
    out.append((PROJECTIVE, L1, state, f"iteration {n} step 1"))
    # (2) push p_a outward
    c = separation_threshold(state, i)
    a, b = state.pairing.pairs[i]
    pa, pb = state.diagonal(i)
    u = la.sub(pa, pb)
    lam = [Fraction(1)] * len(P1.vertices)
    lam[a] = c + 1
    R2 = RayScaling(tuple(lam))
    P2, _ = ray_scale(P1, R2)
    level = la.dot(u, la.scale(c + HALF, pa))
    for j, p in enumerate(P2.vertices):
        side = la.dot(u, p) - level
        if (j == a) != (side > 0) or side == 0:
            raise CertificateError("strict-separation", f"H_{n} does not separate vertex {j}")
    state = state.with_polytope(P2)
    out.append((RAY, R2, state, f"iteration {n} step 2"))
    # (3) origin to (c + 7/10) p_a
    w = la.scale(c + SEVEN_TENTHS, pa)
    minus_w = la.scale(-1, w)
    origin_shift(P2, minus_w)
    L3 = ProjectiveMap.translation(minus_w)
    P3 = apply_projective(L3, P2)
    state = state.translated(P3, minus_w)
    level3 = level - la.dot(u, w)
    out.append((PROJECTIVE, L3, state, f"iteration {n} step 3"))
    # (4) flatten the other vertices onto H_i
    R4 = flatten_onto_hyperplane(state, i, u, level3)
    P4, _ = ray_scale(P3, R4)
    axes = state.completed_axes + ((u, (u, level3)),)
    state = IterationState(P4, state.pairing, axes)
    _persistence(state)
    out.append((RAY, R4, state, f"iteration {n} step 4"))
    return out


def _polar_steps(P: VPolytope, pairing: OppositePairing):
    """All 4d (tag, payload, state, label) steps plus the final state."""
    _check_input(P, pairing)
    state = IterationState(P, pairing)
    steps = []
    for i in range(len(pairing.pairs)):
        it = _iteration_steps(state, i)
        steps.extend(it)
        state = it[-1][2]
    return steps, state


def normalize_crosspolytope(P: VPolytope, pairing: OppositePairing | None = None, keep_snapshots: bool = False):
    """(TransformLog with 4d polar steps, final crosspolytope)."""
    if pairing is None:
        pairing = _vertex_pairing(P)
    steps, state = _polar_steps(P, pairing)
    log = _build(
        "polar", P, [(t, p) for t, p, _, _ in steps], 4 * P.dim, keep_snapshots,
        [lab for _, _, _, lab in steps],
    )
    if log.final.vertices != state.crosspolytope.vertices:
        raise CertificateError("replay", "log replay differs from the iteration state")
    check_orthogonal_concurrent(log.final, pairing)
    return log, log.final


def _vertex_pairing(P: VPolytope) -> OppositePairing:
    V2, _, inc = hull(P.vertices)
    if len(V2.vertices) != len(P.vertices):
        raise NotACrosspolytopeError("some point is not a vertex")
    pos = {v: i for i, v in enumerate(P.vertices)}
    relabel = [pos[v] for v in V2.vertices]
    pairs = [tuple(sorted((relabel[x], relabel[y]))) for x, y in crosspolytope_pairing(inc).pairs]
    return OppositePairing(tuple(sorted(pairs)))


# ---------------------------------------------------------------------------
# orthogonal-concurrent crosspolytopes
# ---------------------------------------------------------------------------


def common_point(P: VPolytope, pairing: OppositePairing):
    """The unique point on every diagonal line, or None."""
    d = P.dim
    rows = []
    for a, b in pairing.pairs:
        pa, pb = P.vertices[a], P.vertices[b]
        u = la.sub(pa, pb)
        for w in la.nullspace([u], d):
            rows.append(tuple(w) + (-la.dot(w, pb),))
    ns = la.nullspace(rows, d + 1) if rows else []
    if len(ns) != 1 or ns[0][d] == 0:
        return None
    h = ns[0]
    return tuple(x / h[d] for x in h[:d])


def check_orthogonal_concurrent(P: VPolytope, pairing: OppositePairing) -> Certificate:
    V = P.vertices
    dirs = [la.sub(V[a], V[b]) for a, b in pairing.pairs]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if la.dot(dirs[i], dirs[j]) != 0:
                raise CertificateError("orthogonal", f"diagonals {i + 1} and {j + 1}")
    x = common_point(P, pairing)
    if x is None:
        raise CertificateError("concurrent", "diagonal lines share no single point")
    return Certificate(
        "orthogonal-concurrent",
        ("orthogonal", "concurrent"),
        {"common_point": [_fmt(t) for t in x]},
    )


def _frame(P: VPolytope, pairing: OppositePairing):
    """(common point, directions u_i, params t where p = X + t u_i)."""
    check_orthogonal_concurrent(P, pairing)
    X = common_point(P, pairing)
    V = P.vertices
    us, ts = [], []
    for a, b in pairing.pairs:
        u = la.sub(V[a], V[b])
        nu = la.dot(u, u)
        ta = la.dot(la.sub(V[a], X), u) / nu
        tb = la.dot(la.sub(V[b], X), u) / nu
        if not (ta > 0 > tb):
            raise CertificateError("concurrent", "common point is outside a diagonal")
        us.append(u)
        ts.append((ta, tb))
    return X, us, ts


def standardize_tail(P: VPolytope, pairing: OppositePairing):
    """Two polar steps: frame map (translation then rows u_i/<u_i,u_i>) and unit rays."""
    X, us, ts = _frame(P, pairing)
    d = P.dim
    M = tuple(la.scale(1 / la.dot(u, u), u) for u in us)
    F = ProjectiveMap.from_parts(M, la.scale(-1, la.matvec(M, X)), la.zeros(d), 1)
    lam = [Fraction(1)] * len(P.vertices)
    for (a, b), (ta, tb) in zip(pairing.pairs, ts):
        lam[a] = 1 / ta
        lam[b] = -1 / tb
    steps = [(PROJECTIVE, F), (RAY, RayScaling(tuple(lam)))]
    log = _build("polar", P, steps, 2, labels=["tail frame", "tail unit rays"])
    for i, (a, b) in enumerate(pairing.pairs):
        e = tuple(Fraction(int(k == i)) for k in range(d))
        if log.final.vertices[a] != e or log.final.vertices[b] != la.scale(-1, e):
            raise CertificateError("standard", "tail did not reach conv(+-e_i)")
    return log


# ---------------------------------------------------------------------------
# cube side
# ---------------------------------------------------------------------------


@dataclass
class _CubeSetup:
    H: HPolytope  # irredundant, normal-primitive rows, original origin
    pre: ProjectiveMap | None  # translation moving the origin inside
    polar: VPolytope
    pairing: OppositePairing


def _setup_cube(Q: HPolytope) -> _CubeSetup:
    try:
        V, H, inc = realize(Q)
        pairing = cube_pairing(inc)
    except (NotACubeError, DegenerateError) as exc:
        raise NotACubeError(str(exc)) from exc
    if len(H.rows) != 2 * Q.dim:
        raise NotACubeError(f"{len(H.rows)} facets")
    H = normal_rows(H)
    pre = None
    work = H
    if any(b <= 0 for b in H.offsets):
        g = la.centroid(V.vertices)
        pre = ProjectiveMap.translation(la.scale(-1, g))
        work = normal_rows(apply_projective_h(pre, H, V.vertices))
    polar = VPolytope(tuple(la.scale(1 / b, a) for a, b in work.rows))
    return _CubeSetup(H, pre, polar, pairing)


def _to_cube_steps(polar_steps, start: HPolytope, pre=None, post=None):
    """Translate polar (tag, payload) steps into cube steps, tracking rows.

    ``pre`` is merged into the first projective step and ``post`` into the
    last one.
    """
    out = []
    n = len(polar_steps)
    first_proj = next(k for k, (t, _) in enumerate(polar_steps) if t == PROJECTIVE)
    last_proj = max(k for k, (t, _) in enumerate(polar_steps) if t == PROJECTIVE)
    # rays act on offsets in the working frame (origin inside); ``frame``
    # maps the working frame to the actual one while a translation is pending
    frame = pre.inverse() if pre is not None else None
    H = start if pre is None else normal_rows(apply_projective_h(pre, start))
    for k, (tag, payload) in enumerate(polar_steps):
        if tag == PROJECTIVE:
            phi = primal_of_polar(payload)
            H = normal_rows(apply_projective_h(phi, H))
            if k == first_proj and pre is not None:
                phi = phi.compose(pre)
                frame = None
            if k == last_proj and post is not None:
                phi = post.compose(phi)
                frame = post
            out.append((PROJECTIVE, phi))
        else:
            offs = tuple(b / l for b, l in zip(H.offsets, payload.lambdas))
            H = HPolytope(tuple((a, o) for a, o in zip(H.normals, offs)))
            actual = H if frame is None else normal_rows(apply_projective_h(frame, H))
            out.append((NORMAL, NormalTransform(actual.offsets)))
    assert len(out) == n
    return out


def normalize_cube(Q: HPolytope, keep_snapshots: bool = False) -> TransformLog:
    """Cube log of at most 4d+2 steps ending at the standard cube [-1, 1]^d.

    The log acts on the irredundant rows of Q (primitive integer normals).
    Row j ends as +-e_i according to the opposite-facet pairing.
    """
    s = _setup_cube(Q)
    steps, state = _polar_steps(s.polar, s.pairing)
    polar = [(t, p) for t, p, _, _ in steps]
    labels = [lab for _, _, _, lab in steps]
    tail = standardize_tail(state.crosspolytope, s.pairing)
    polar += [(e.tag, e.payload) for e in tail.entries]
    labels += ["tail frame", "tail unit rays"]
    cube_steps = _to_cube_steps(polar, s.H, pre=s.pre)
    log = _build("cube", s.H, cube_steps, 4 * Q.dim + 2, keep_snapshots, labels)
    log.check_bound()
    if log.final.canonical() != standard_cube(Q.dim).canonical():
        raise CertificateError("standard", "normalization did not reach the standard cube")
    return log


# ---------------------------------------------------------------------------
# relating two cubes
# ---------------------------------------------------------------------------


def _junction_map(X1: VPolytope, X2: VPolytope, pairing: OppositePairing) -> tuple:
    """Linear L with L(v_j) = kappa_j w_j, kappa_j > 0, for the two normalized
    crosspolytopes (origin on the last diagonal in both). Returns (L, kappa)."""
    d = X1.dim
    Xa, ua, ta = _frame(X1, pairing)
    Xb, ub, tb = _frame(X2, pairing)
    nd1, nd2 = la.dot(ua[-1], ua[-1]), la.dot(ub[-1], ub[-1])
    tau1 = -la.dot(Xa, ua[-1]) / nd1
    tau2 = -la.dot(Xb, ub[-1]) / nd2
    if la.add(Xa, la.scale(tau1, ua[-1])) != la.zeros(d) or la.add(Xb, la.scale(tau2, ub[-1])) != la.zeros(d):
        raise CertificateError("origin-on-last-diagonal", "normalized origin is off l_d")
    # images of the frame vectors, written in the second frame
    C = [[Fraction(0)] * d for _ in range(d)]
    for j in range(d - 1):
        (tp, tm), (sp, sm) = ta[j], tb[j]
        alpha = tau1 * (1 / tp - 1 / tm) / (tau2 * (1 / sp - 1 / sm))
        beta = tau1 / tp - tau2 * alpha / sp
        C[j][j] = alpha
        C[d - 1][j] = beta
    C[d - 1][d - 1] = Fraction(1)
    U = la.transpose(ua)
    W = la.transpose(ub)
    L = la.matmul(la.matmul(W, C), la.inverse(U))
    kappa = []
    for v, w in zip(X1.vertices, X2.vertices):
        Lv = la.matvec(L, v)
        k = next(i for i, x in enumerate(w) if x != 0)
        kap = Lv[k] / w[k]
        if kap <= 0 or la.scale(kap, w) != Lv:
            raise CertificateError("junction-rays", "aligned vertex is off the target ray")
        kappa.append(kap)
    return L, tuple(kappa)


def _inverse_polar(tag, payload):
    if tag == PROJECTIVE:
        return tag, payload.inverse()
    return tag, RayScaling(tuple(1 / x for x in payload.lambdas))


def simplify_steps(steps, side: str):
    """Merge adjacent steps of the same kind and drop identities."""
    out = []
    for tag, payload in steps:
        if out and out[-1][0] == tag:
            prev = out.pop()[1]
            if tag == PROJECTIVE:
                payload = payload.compose(prev)
            elif tag == RAY:
                payload = RayScaling(tuple(x * y for x, y in zip(prev.lambdas, payload.lambdas)))
            # NORMAL: offset replacement, the later one wins
        out.append((tag, payload))
        if tag in (PROJECTIVE, RAY) and payload.is_identity():
            out.pop()
    return out


def _drop_trivial_normals(steps, start: HPolytope):
    """Remove normal steps that leave the offsets unchanged, re-merging neighbours."""
    changed = True
    while changed:
        changed = False
        H = start
        for k, (tag, payload) in enumerate(steps):
            if tag == NORMAL and payload.new_offsets == H.offsets:
                steps = simplify_steps(steps[:k] + steps[k + 1:], "cube")
                changed = True
                break
            if tag == PROJECTIVE:
                H = normal_rows(apply_projective_h(payload, H))
            else:
                H = HPolytope(tuple((a, o) for a, o in zip(H.normals, payload.new_offsets)))
    return steps


def relate_cubes(Q: HPolytope, Q2: HPolytope, keep_snapshots: bool = False) -> TransformLog:
    """Cube log of at most 8d-1 steps taking Q exactly onto Q2.

    Facet j of Q goes to the facet of Q2 with the same (pair, side) label
    under the two opposite-facet pairings.
    """
    if Q.dim != Q2.dim:
        raise ValueError("dimension mismatch")
    d = Q.dim
    s1, s2 = _setup_cube(Q), _setup_cube(Q2)
    st1, end1 = _polar_steps(s1.polar, s1.pairing)
    st2, end2 = _polar_steps(s2.polar, s2.pairing)
    # relabel the second polar so pair i side k matches the first
    perm = [None] * (2 * d)
    for (a1, b1), (a2, b2) in zip(s1.pairing.pairs, s2.pairing.pairs):
        perm[a1], perm[b1] = a2, b2
    def relabel_v(P):
        return VPolytope(tuple(P.vertices[perm[j]] for j in range(2 * d)))
    def relabel_step(tag, payload):
        if tag == RAY:
            return tag, RayScaling(tuple(payload.lambdas[perm[j]] for j in range(2 * d)))
        return tag, payload

    X1 = end1.crosspolytope
    X2 = relabel_v(end2.crosspolytope)
    L, kappa = _junction_map(X1, X2, s1.pairing)
    R4 = st1[-1][1].lambdas
    R4b = relabel_step(RAY, st2[-1][1])[1].lambdas
    T3 = st1[-2][1]
    T3b = st2[-2][1]
    polar = [(t, p) for t, p, _, _ in st1[:-2]]
    polar.append((PROJECTIVE, ProjectiveMap.linear(L).compose(T3)))
    polar.append((RAY, RayScaling(tuple(r / k / rb for r, k, rb in zip(R4, kappa, R4b)))))
    polar.append((PROJECTIVE, T3b.inverse()))
    for t, p, _, _ in reversed(st2[:-2]):
        polar.append(_inverse_polar(*relabel_step(t, p)))
    polar = simplify_steps(polar, "polar")
    post = s2.pre.inverse() if s2.pre is not None else None
    if polar:
        cube_steps = _to_cube_steps(polar, s1.H, pre=s1.pre, post=post)
    else:
        ends = [m for m in (s1.pre, post) if m is not None]
        cube_steps = [(PROJECTIVE, ends[-1].compose(ends[0]) if len(ends) == 2 else ends[0])] if ends else []
    cube_steps = simplify_steps(cube_steps, "cube")
    cube_steps = _drop_trivial_normals(cube_steps, s1.H)
    log = _build("cube", s1.H, cube_steps, 8 * d - 1, keep_snapshots)
    log.check_bound()
    if log.final.canonical() != s2.H.canonical():
        raise CertificateError("relate", "log does not reach the second cube")
    return log


# ---------------------------------------------------------------------------
# empirical continuity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuityReport:
    eps: Fraction
    drift: Fraction  # max entry change of the tail frame map
    calibrated_constant: Fraction
    bounded: bool
    notes: tuple = field(default=())


def _tail_frame(P: VPolytope, pairing: OppositePairing):
    _, state = _polar_steps(P, pairing)
    return standardize_tail(state.crosspolytope, pairing).entries[0].payload.block


def _perturbed(P: VPolytope, eps: Fraction, seed: int) -> VPolytope:
    rng = random.Random(seed)
    return VPolytope(tuple(tuple(x + eps * rng.choice((-1, 1)) for x in v) for v in P.vertices))


def _drift(B0, B1) -> Fraction:
    return max(abs(x - y) for r0, r1 in zip(B0, B1) for x, y in zip(r0, r1))


def continuity_check(P: VPolytope, pairing: OppositePairing | None = None, eps=Fraction(1, 10**6),
                     seed: int = 0, factor: int = 10) -> ContinuityReport:
    """Advisory check that the tail frame map moves by O(eps).

    The constant is calibrated from a perturbation 100 times larger; the run
    is flagged (not failed) if the drift ratio exceeds ``factor`` times it.
    """
    if pairing is None:
        pairing = _vertex_pairing(P)
    eps = Fraction(eps)
    base = _tail_frame(P, pairing)
    cal_eps = eps * 100
    cal = _drift(base, _tail_frame(_perturbed(P, cal_eps, seed), pairing)) / cal_eps
    drift = _drift(base, _tail_frame(_perturbed(P, eps, seed), pairing))
    limit = factor * max(cal, Fraction(1))
    return ContinuityReport(eps, drift, cal, drift / eps <= limit)
