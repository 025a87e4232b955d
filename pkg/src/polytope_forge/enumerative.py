"""Cubical f / h^sc / h^c / g^c calculus and connected-sum arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import PolytopeError


class EnumerativeError(PolytopeError):
    pass


@dataclass(frozen=True)
class RatPolynomial:
    """Exact polynomial, coefficients in ascending degree, trailing zeros trimmed."""

    coefficients: tuple

    def __post_init__(self):
        c = [Fraction(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "RatPolynomial":
        return cls((0,) * k + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return RatPolynomial(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return RatPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        if not self.coefficients or not other.coefficients:
            return RatPolynomial(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RatPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, divisor: "RatPolynomial"):
        num = list(self.coefficients)
        den = divisor.coefficients
        if not den:
            raise ZeroDivisionError
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1] / den[-1]
            q[i] = c
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
        return RatPolynomial(tuple(q)), RatPolynomial(tuple(num))

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def padded(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))


def _poly(x) -> RatPolynomial:
    return x if isinstance(x, RatPolynomial) else RatPolynomial((x,))


T = RatPolynomial((0, 1))


@dataclass(frozen=True)
class FVector:
    d: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.d:
            raise EnumerativeError(f"expected {self.d} entries, got {len(entries)}")
        if any(x < 0 for x in entries):
            raise EnumerativeError("negative face count")

    def euler_holds(self) -> bool:
        return sum((-1) ** i * f for i, f in enumerate(self.entries)) == 1 - (-1) ** self.d

    def polynomial(self) -> RatPolynomial:
        return RatPolynomial(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass(frozen=True)
class GcVector:
    d: int
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if len(self.entries) != self.d // 2 + 1:
            raise EnumerativeError("g^c vector has wrong length")

    def __getitem__(self, i):
        return self.entries[i]


def cube_f(d: int) -> FVector:
    return FVector(d, tuple(2 ** (d - i) * comb(d, i) for i in range(d)))


def short_cubical_h(f: FVector) -> RatPolynomial:
    """(1-t)^(d-1) f(2t/(1-t)), expanded termwise as sum f_i (2t)^i (1-t)^(d-1-i)."""
    d = f.d
    one_minus_t = RatPolynomial((1, -1))
    out = RatPolynomial(())
    for i, fi in enumerate(f.entries):
        out = out + fi * (2 * T) ** i * one_minus_t ** (d - 1 - i)
    return out


def cubical_h(f: FVector) -> RatPolynomial:
    """Solve (1+t) h^c = t h^sc + 2^(d-1) (1 + t^(d+1)) by exact division."""
    d = f.d
    num = T * short_cubical_h(f) + 2 ** (d - 1) * (1 + RatPolynomial.monomial(d + 1))
    q, r = num.divmod(RatPolynomial((1, 1)))
    if r.coefficients:
        raise EnumerativeError("f-vector does not give a polynomial h^c (not cubical?)")
    return q


def cubical_h_closed_form_numerator(f: FVector) -> RatPolynomial:
    """Numerator of the closed form with the (1 - (-t)^(d+1)) term, before
    division by (1+t); exposed so the odd-d discrepancy can be checked."""
    d = f.d
    return T * short_cubical_h(f) + 2 ** (d - 1) * (1 - (-T) ** (d + 1))


def check_dehn_sommerville(h: RatPolynomial, d: int) -> bool:
    if h.degree > d:
        return False
    c = h.padded(d + 1)
    return all(c[i] == c[d - i] for i in range(d + 1))


def gc_vector(h: RatPolynomial, d: int) -> GcVector:
    if not check_dehn_sommerville(h, d):
        raise EnumerativeError("Dehn-Sommerville relations violated")
    c = h.padded(d + 1)
    if c[0] != 2 ** (d - 1):
        raise EnumerativeError("h^c_0 != 2^(d-1)")
    entries = [c[0]] + [c[i] - c[i - 1] for i in range(1, d // 2 + 1)]
    if any(x.denominator != 1 for x in entries):
        raise EnumerativeError("non-integral g^c")
    return GcVector(d, tuple(int(x) for x in entries))


def gc_of_f(f: FVector) -> GcVector:
    return gc_vector(cubical_h(f), f.d)


def connected_sum_f(fP: FVector, fQ: FVector, d: int | None = None) -> FVector:
    """f(P # Q) = f(P) + f(Q) - f(facet cube incl. itself) - t^(d-1)."""
    d = d or fP.d
    if fP.d != d or fQ.d != d:
        raise EnumerativeError("dimension mismatch")
    facet = list(cube_f(d - 1).entries) + [1]
    out = [a + b - c for a, b, c in zip(fP.entries, fQ.entries, facet)]
    out[d - 1] -= 1
    return FVector(d, tuple(out))


def tower_f(d: int, m: int) -> FVector:
    f = cube_f(d)
    for _ in range(m - 1):
        f = connected_sum_f(f, cube_f(d), d)
    return f


def c_connected_sum_f(f1: FVector, f2: FVector, d: int, m: int) -> FVector:
    return connected_sum_f(connected_sum_f(f1, tower_f(d, m), d), f2, d)


def gc_of_c_connected_sum(g1: GcVector, g2: GcVector, d: int, m: int | None = None) -> GcVector:
    """g^c of Q1 # C # Q2 with a connector of m cubes (default 4d)."""
    if g1.d != d or g2.d != d:
        raise EnumerativeError("dimension mismatch")
    m = 4 * d if m is None else m
    out = [2 ** (d - 1)]
    for i in range(1, d // 2 + 1):
        out.append(g1[i] + g2[i] + ((m + 1) * 2 ** (d - 1) if i == 1 else 0))
    return GcVector(d, tuple(out))


def _f_from_gc_rational(g: Sequence, d: int) -> tuple:
    k = d // 2
    h = [Fraction(0)] * (d + 1)
    acc = Fraction(0)
    for i in range(k + 1):
        acc += Fraction(g[i])
        h[i] = acc
        h[d - i] = acc
    # h^sc = ((1+t) h^c - 2^(d-1)(1 + t^(d+1))) / t
    num = (1 + T) * RatPolynomial(h) - 2 ** (d - 1) * (1 + RatPolynomial.monomial(d + 1))
    hsc, r = num.divmod(T)
    if r.coefficients:
        raise EnumerativeError("g^c_0 must equal 2^(d-1)")
    # h^sc = sum f_i (2t)^i (1-t)^(d-1-i) is triangular in f
    one_minus_t = RatPolynomial((1, -1))
    basis = [(2 * T) ** i * one_minus_t ** (d - 1 - i) for i in range(d)]
    residual = list(hsc.padded(d))
    f = []
    for i in range(d):
        fi = residual[i] / basis[i][i]
        f.append(fi)
        for j in range(d):
            residual[j] -= fi * basis[i][j]
    if any(x != 0 for x in residual) or hsc.degree >= d:
        raise EnumerativeError("g^c data is inconsistent")
    return tuple(f)


def f_from_gc(g: GcVector | Sequence, d: int | None = None) -> FVector:
    """Inverse of f -> g^c for cubical f-vectors."""
    if isinstance(g, GcVector):
        d, g = g.d, g.entries
    f = _f_from_gc_rational(g, d)
    if any(x.denominator != 1 for x in f):
        raise EnumerativeError("g^c data does not map to an integral f-vector")
    return FVector(d, tuple(int(x) for x in f))


def gc_direction_to_f(direction: Sequence, d: int) -> tuple:
    """Image of a g^c direction (g_1..g_k) under the linear part of g^c -> f,
    i.e. f(P) - f(cube) for g^c(P) = (2^(d-1), direction)."""
    base = _f_from_gc_rational((2 ** (d - 1),) + (0,) * (d // 2), d)
    moved = _f_from_gc_rational((2 ** (d - 1),) + tuple(direction), d)
    return tuple(a - b for a, b in zip(moved, base))


# ---------------------------------------------------------------------------
# density scheduling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """Abstract g^c sequence whose coordinate ``index`` dominates, with leading
    term ``coeff * 2^n * n^power`` and zeros above ``index``."""

    index: int
    power: int
    coeff: Fraction = Fraction(1)

    def leading(self, n) -> Fraction:
        return Fraction(self.coeff) * Fraction(2) ** n * Fraction(n) ** self.power


def default_generators(d: int) -> dict:
    """Growth 2^n n^(i-1) for the sequence dominating coordinate i."""
    return {i: Generator(i, i - 1) for i in range(1, d // 2 + 1)}


def _ceil_log2(x: Fraction) -> int:
    """Exact ceil(log2 x) for positive rational x."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** k < x:
        k += 1
    while Fraction(2) ** (k - 1) >= x:
        k -= 1
    return k


def pairing_index(ratio, m: int) -> int:
    """l = ceil(log c + m + log m), base-2 logarithms, evaluated exactly."""
    ratio = Fraction(ratio)
    if ratio <= 0:
        raise EnumerativeError("ratio must be positive")
    return _ceil_log2(ratio * m * 2 ** m)


def squared_cosine(u: Sequence, v: Sequence) -> Fraction:
    """Signed squared cosine: cos^2 with the sign of <u, v>."""
    uv = sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))
    uu = sum((Fraction(a) * a for a in u), Fraction(0))
    vv = sum((Fraction(b) * b for b in v), Fraction(0))
    if uu == 0 or vv == 0:
        raise EnumerativeError("zero vector")
    c2 = uv * uv / (uu * vv)
    return c2 if uv >= 0 else -c2


@dataclass(frozen=True)
class ScheduleStep:
    m: int
    indices: tuple  # (coordinate, sequence index) pairs, top coordinate first
    gc: tuple  # combined g^c_1..g^c_k (leading terms plus connector terms)
    cos2: Fraction  # squared cosine to the target in g^c space
    cos2_f: Fraction  # same angle measured at the cube's f-vector in f space


def density_schedule(target: Sequence, d: int, generators: dict | None = None,
                     m_values: Sequence[int] | None = None, connector: int | None = None,
                     mode: str = "symbolic") -> list:
    """Schedule C-connected sums of generator sequences toward ``target``.

    Coordinates are handled from floor(d/2) down to 1. The dominant coordinate
    uses index m; each lower coordinate i pairs with index
    l = ceil(log c + m + log m), c = s_i / s_(i+1), and for i = 1 the
    corrected c = s_1/s_2 + 2^(d-m)(1 - 1/m).

    ``mode="symbolic"`` combines the leading terms through the asymptotic
    identity 2^l l^(p) ~ c * (term of coordinate i+1), which is what makes the
    ratios converge. ``mode="ceiling"`` evaluates each generator at the integer
    index l instead; the ceiling then only fixes ratios within a factor of 2.
    Each C-connected sum adds (connector + 1) 2^(d-1) to g^c_1.
    """
    if mode not in ("symbolic", "ceiling"):
        raise ValueError(mode)
    k = d // 2
    s = [Fraction(x) for x in target]
    if len(s) != k:
        raise EnumerativeError(f"target must have {k} coordinates")
    if any(x < 0 for x in s) or all(x == 0 for x in s):
        raise EnumerativeError("target must be a nonzero nonnegative ray")
    gens = generators or default_generators(d)
    m_values = list(m_values) if m_values is not None else list(range(d, d + 10))
    connector = 4 * d if connector is None else connector
    top = max(i for i in range(1, k + 1) if s[i - 1] != 0)
    target_f = gc_direction_to_f(s, d)
    steps = []
    for m in m_values:
        gc = [Fraction(0)] * k
        gc[top - 1] = gens[top].leading(m)
        indices = [(top, m)]
        for i in range(top - 1, 0, -1):
            if s[i - 1] == 0:
                continue
            if s[i] == 0:
                raise EnumerativeError(f"target coordinate {i + 1} is zero but a ratio is required")
            c = s[i - 1] / s[i]
            if i == 1:
                c += Fraction(2) ** (d - m) * (1 - Fraction(1, m))
            l = pairing_index(c, m)
            indices.append((i, l))
            if mode == "symbolic":
                gc[i - 1] = c * gc[i]
            else:
                gc[i - 1] = gens[i].leading(l)
        gc[0] += (len(indices) - 1) * (connector + 1) * 2 ** (d - 1)
        steps.append(ScheduleStep(
            m, tuple(indices), tuple(gc), squared_cosine(gc, s),
            squared_cosine(gc_direction_to_f(gc, d), target_f),
        ))
    return steps
