"""Dense exact linear algebra over the rationals.

Vectors are tuples of rationals, matrices are tuples of row tuples. Nothing
here ever touches a float. The rational type is gmpy2's ``mpq`` when
available (an order of magnitude faster) and ``fractions.Fraction``
otherwise; the two interoperate and hash identically.
"""

from __future__ import annotations

import fractions
from math import gcd, lcm

try:
    from gmpy2 import mpq as Fraction
except ImportError:  # pragma: no cover
    Fraction = fractions.Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


_RATIONAL = type(Fraction(1, 2))


def frac(x) -> Fraction:
    if type(x) is _RATIONAL:
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coordinates")
    return Fraction(x)


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(s, v) -> Vector:
    return tuple(s * a for a in v)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in a)


def centroid(points: Sequence[Sequence]) -> Vector:
    n = len(points)
    return tuple(sum(c, Fraction(0)) / n for c in zip(*points))


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _int_row(r) -> list[int]:
    r = vec(r)
    den = lcm(*(x.denominator for x in r)) if r else 1
    return [int(x * den) for x in r]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free elimination on integer-scaled rows."""
    if not rows:
        return 0
    m = [_int_row(r) for r in rows]
    m = [r for r in m if any(r)]
    ncols = len(m[0]) if m else 0
    rk = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][c]
        for i in range(rk + 1, len(m)):
            f = m[i][c]
            m[i] = [(p * x - f * y) // prev for x, y in zip(m[i], m[rk])]
        prev = p
        rk += 1
        if rk == len(m):
            break
    return rk


def det(a: Sequence[Sequence]) -> Fraction:
    m = [list(vec(r)) for r in a]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    m, pivots = _rref([list(vec(r)) for r in rows])
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -m[i][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector:
    """Unique solution of a square nonsingular system."""
    n = len(a)
    aug = [list(vec(row)) + [frac(bi)] for row, bi in zip(a, b)]
    m, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(m[i][n] for i in range(n))


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(vec(row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(m[i][n:]) for i in range(n))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to coprime integers."""
    v = vec(v)
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def hyperplane_through(points: Sequence[Sequence]) -> tuple[Vector, Fraction] | None:
    """Normal/offset (a, b) with <a, p> = b on all points, or None if they do
    not determine a unique hyperplane."""
    d = len(points[0])
    rows = [tuple(p) + (Fraction(-1),) for p in points]
    ns = nullspace(rows, d + 1)
    if len(ns) != 1:
        return None
    h = ns[0]
    a, b = h[:d], h[d]
    if all(x == 0 for x in a):
        return None
    return a, b
