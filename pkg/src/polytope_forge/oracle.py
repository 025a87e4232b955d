"""Naive exact hull by d-subset hyperplane enumeration.

Independent of :mod:`polytope_forge.hull`; used only to cross-check it. Every
d-subset of the input spans a candidate hyperplane and the candidate is a
facet iff all points lie weakly on one side. A floating-point filter discards
candidates that provably have points strictly on both sides. It works in
coordinates relative to the first point of the subset, and its error bound
covers the rounding of the inputs as well as the arithmetic, so a rejection
is never wrong. Everything that is not rejected is decided in exact integer
arithmetic.
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from math import comb, gcd, lcm

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

from . import _linalg as la
from ._linalg import Fraction
from .errors import DegenerateError, OracleBoundsExceededError
from .geometry import HPolytope, IncidenceStructure, VPolytope

ENV_VAR = "POLYTOPE_FORGE_ORACLE_LIMIT"
DEFAULT_MAX_DIM = 5
DEFAULT_MAX_POINTS = 200
# (relative input error, expansion rounding allowance) per precision; the
# input error covers conversion, the subtraction and the d-term sums
_DOUBLE = (2.0**-48, 1e-11)
_LONG = (np.longdouble(2.0) ** -58, np.longdouble(1e-15))
_CHUNK = 100_000


def oracle_bounds() -> tuple[int, int]:
    """(max dim, max points); ``POLYTOPE_FORGE_ORACLE_LIMIT`` is ``N`` or ``D:N``."""
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return DEFAULT_MAX_DIM, DEFAULT_MAX_POINTS
    if ":" in raw:
        d, n = raw.split(":", 1)
        return int(d), int(n)
    return DEFAULT_MAX_DIM, int(raw)


def within_bounds(n_points: int, dim: int) -> bool:
    max_d, max_n = oracle_bounds()
    return dim <= max_d and n_points <= max_n


def _int_homogeneous(p) -> tuple[int, ...]:
    den = lcm(*(x.denominator for x in p))
    return tuple(int(x * den) for x in p) + (den,)


@lru_cache(maxsize=None)
def _minor_plan(d: int):
    """Per row r, for each column subset of size r+1 (in combinations order):
    the (column, index of the complementary subset one level up, sign) terms."""
    ncol = d + 1
    plan = []
    prev = {(): 0}
    for r in range(d):
        level, nxt = [], {}
        for k, S in enumerate(itertools.combinations(range(ncol), r + 1)):
            level.append(tuple(
                (j, prev[S[:pos] + S[pos + 1:]], -1 if (r - pos) % 2 else 1) for pos, j in enumerate(S)
            ))
            nxt[S] = k
        plan.append(level)
        prev = nxt
    full = tuple(range(ncol))
    top = tuple((prev[full[:k] + full[k + 1:]], -1 if (d - k) % 2 else 1) for k in range(ncol))
    return plan, top


def _int_cofactors(rows) -> tuple:
    """Signed maximal minors of a d x (d+1) integer matrix: h with rows . h = 0."""
    plan, top = _minor_plan(len(rows))
    minors = [1]
    for row, level in zip(rows, plan):
        minors = [
            sum(row[j] * minors[c] if sg > 0 else -row[j] * minors[c] for j, c, sg in terms)
            for terms in level
        ]
    return tuple(minors[c] if sg > 0 else -minors[c] for c, sg in top)


def _cofactors(A: np.ndarray, E: np.ndarray, safety: float):
    """Cofactor vectors of stacked (d-1) x d matrices, with error bounds.

    A has shape (d-1, d, m). E bounds the entrywise error of A. Returns
    (n, err) with |n - n_exact| <= err, where n_exact is the cofactor vector
    of the exact matrix. The bound is perm(|A| + E) - perm(|A|) plus a
    relative allowance for rounding in the expansion itself.
    """
    rows, ncol, m = A.shape
    absA = np.abs(A)
    absAE = absA + E
    one = np.ones(m, dtype=A.dtype)
    minors = {(): (one, one, one)}
    for r in range(rows):
        nxt = {}
        for S in itertools.combinations(range(ncol), r + 1):
            val = np.zeros(m, dtype=A.dtype)
            bnd = np.zeros(m, dtype=A.dtype)
            bnde = np.zeros(m, dtype=A.dtype)
            for pos, j in enumerate(S):
                mv, mb, me = minors[S[:pos] + S[pos + 1:]]
                if (r - pos) % 2:
                    val -= A[r, j] * mv
                else:
                    val += A[r, j] * mv
                bnd += absA[r, j] * mb
                bnde += absAE[r, j] * me
            nxt[S] = (val, bnd, bnde)
        minors = nxt
    n = np.zeros((m, ncol), dtype=A.dtype)
    err = np.zeros((m, ncol), dtype=A.dtype)
    full = tuple(range(ncol))
    for k in range(ncol):
        mv, mb, me = minors[full[:k] + full[k + 1:]]
        n[:, k] = (-1.0 if (rows - k) % 2 else 1.0) * mv
        err[:, k] = (me - mb) + safety * me
    return n, err


def _float_filter(Pf: np.ndarray, subsets: np.ndarray, ulp, safety) -> np.ndarray:
    """Boolean mask of subsets that survive (are not provably non-facets).

    Work relative to the first point of each subset so that small clusters
    far from the origin keep their precision. Input rounding of the float
    coordinates is part of the error bound.
    """
    m, d = subsets.shape
    P0 = Pf[subsets[:, 0]]  # (m, d)
    Pi = Pf[subsets[:, 1:]]  # (m, d-1, d)
    D = Pi - P0[:, None, :]
    E = ulp * (np.abs(Pi) + np.abs(P0)[:, None, :])
    n, err = _cofactors(
        np.ascontiguousarray(D.transpose(1, 2, 0)), np.ascontiguousarray(E.transpose(1, 2, 0)), safety
    )
    absn = np.abs(n) + err
    keep = np.ones(m, dtype=bool)
    for Q in (Pf[_sample(len(Pf))], Pf):
        idx = np.nonzero(keep)[0]
        ni, ei, ai, p0 = n[idx], err[idx], absn[idx], P0[idx]
        absQ, absp0 = np.abs(Q), np.abs(p0)
        S = ni @ Q.T - np.einsum("ij,ij->i", ni, p0)[:, None]
        # |q - p0| <= |q| + |p0| entrywise; rounding of q, p0 and the products
        # is charged to ulp times the absolute sums
        B = ei @ absQ.T + np.einsum("ij,ij->i", absp0, ei)[:, None]
        B += ulp * (ai @ absQ.T + np.einsum("ij,ij->i", absp0, ai)[:, None])
        B *= 2.0
        both = (S > B).any(axis=1) & (S < -B).any(axis=1)
        keep[idx[both]] = False
    return keep


def _to_long(x) -> np.longdouble:
    """x to long double with relative error below 2^-62."""
    if x == 0:
        return np.longdouble(0)
    p, q = int(x.numerator), int(x.denominator)
    sp = max(p.bit_length() - 63, 0) if p > 0 else max((-p).bit_length() - 63, 0)
    sq = max(q.bit_length() - 63, 0)
    num = np.longdouble(p >> sp if p > 0 else -((-p) >> sp))
    return np.ldexp(num / np.longdouble(q >> sq), sp - sq)


def _sample(n: int, k: int = 16) -> np.ndarray:
    return np.arange(n) if n <= k else np.linspace(0, n - 1, k).astype(np.int64)


def _filter_usable(points) -> bool:
    for p in points:
        for x in p:
            if x == 0:
                continue
            f = abs(float(x))
            if not (1e-120 < f < 1e120):
                return False
    return True


def brute_force_hull(points, max_dim: int | None = None, max_points: int | None = None):
    """(VPolytope, HPolytope, IncidenceStructure) by d-subset enumeration."""
    pts = []
    seen = set()
    for p in points:
        p = la.vec(p)
        if p not in seen:
            seen.add(p)
            pts.append(p)
    if not pts:
        raise DegenerateError("empty point set")
    d = len(pts[0])
    bd, bn = oracle_bounds()
    bd = max_dim if max_dim is not None else bd
    bn = max_points if max_points is not None else bn
    if d > bd or len(pts) > bn:
        raise OracleBoundsExceededError(f"d={d}, n={len(pts)} exceeds oracle bounds d<={bd}, n<={bn}")
    if la.affine_rank(pts) < d:
        raise DegenerateError("points are not full-dimensional")

    n = len(pts)
    Wi = [tuple(mpz(x) for x in _int_homogeneous(p)) for p in pts]
    use_filter = _filter_usable(pts) and comb(n, d) > 2000
    if use_filter:
        Pf = np.array([[float(x) for x in p] for p in pts])
        Pl = np.array([[_to_long(x) for x in p] for p in pts], dtype=np.longdouble)

    facets: list[tuple[tuple[int, ...], frozenset]] = []
    found_rows = set()

    order = list(range(n))

    def consider(subset):
        sset = set(subset)
        for _, on in facets:
            if sset <= on:
                return
        h = _int_cofactors([Wi[i] for i in subset])  # h . (x, 1) = 0 on the plane
        if not any(h[:d]):
            return
        sign = 0
        first = None
        on = []
        # points that separated an earlier candidate are tried first
        for i in order:
            w = Wi[i]
            s = sum(x * y for x, y in zip(h, w))
            if s == 0:
                on.append(i)
                continue
            sg = 1 if s > 0 else -1
            if sign == 0:
                sign, first = sg, i
            elif sg != sign:
                order.remove(i)
                order.insert(0, i)
                order.remove(first)
                order.insert(0, first)
                return
        on.sort()
        g = gcd(*h)
        h = tuple(x // g for x in h)
        if sign > 0:
            h = tuple(-x for x in h)
        if h not in found_rows:
            found_rows.add(h)
            facets.append((h, frozenset(on)))

    combos = itertools.combinations(range(n), d)
    if use_filter:
        while True:
            block = np.fromiter(
                itertools.chain.from_iterable(itertools.islice(combos, _CHUNK)),
                dtype=np.int64,
            )
            if block.size == 0:
                break
            block = block.reshape(-1, d)
            block = block[_float_filter(Pf, block, *_DOUBLE)]
            if len(block):
                # thin slabs leave near-degenerate candidates; a second pass in
                # long double settles most of them before exact arithmetic
                block = block[_float_filter(Pl, block, *_LONG)]
            for row in block:
                consider(tuple(int(i) for i in row))
    else:
        for subset in combos:
            consider(subset)

    rows = []
    for h, _ in facets:
        rows.append((tuple(Fraction(x) for x in h[:d]), Fraction(-h[d])))
    keep = []
    for i in range(n):
        normals = [rows[j][0] for j, (_, on) in enumerate(facets) if i in on]
        if la.rank(normals) == d:
            keep.append(i)
    index = {old: new for new, old in enumerate(keep)}
    order = sorted(range(len(rows)), key=lambda j: (rows[j][0], rows[j][1]))
    H = HPolytope(tuple(rows[j] for j in order)).normalized()
    inc = IncidenceStructure(
        d, len(keep),
        tuple(frozenset(index[i] for i in facets[j][1] if i in index) for j in order),
    )
    return VPolytope(tuple(pts[i] for i in keep)), H, inc


def same_incidence(V1: VPolytope, inc1: IncidenceStructure, V2: VPolytope, inc2: IncidenceStructure) -> bool:
    """Equality of incidence structures after matching vertices by coordinates."""
    if sorted(V1.vertices) != sorted(V2.vertices):
        return False
    def as_sets(V, inc):
        return sorted(sorted(V.vertices[i] for i in f) for f in inc.facets)
    return as_sets(V1, inc1) == as_sets(V2, inc2)
