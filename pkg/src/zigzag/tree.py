"""Compactly induced symmetric-power functions on the tree and the Hecke
operator T.

Vertices are right cosets with the upper-triangular canonical family
(p^a, c; 0, 1), c reduced modulo p^a with a finite base-p tail; this is
the same family that appears in the two T-summand matrices, so applying T
needs just one reduction step per term.  An elementary function [g, v] is
supported on the coset of g with value v in Sym^r over the coefficient
ring; coefficient rings are F_{p^f} and Z/p^M.

Tree distance from the base vertex comes from the elementary divisors of
the representing matrix: for (p^a, c; 0, 1) the divisor exponents are
(e, a - e) with e = min(0, a, v_p(c)), so the distance is a - 2e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularMatrix, WrongDegree
from .ffield import residue_field
from .padic import teichmuller_int, vp_fraction

INFTY = float("inf")


# -- coefficient rings -----------------------------------------------------------


class ZModRing:
    """Z / p^M with Teichmuller lifts reduced from Z_p."""

    def __init__(self, p: int, M: int):
        self.p = p
        self.M = M
        self.mod = p ** M
        self.name = f"zmod:{M}"

    def from_int(self, n: int):
        return n % self.mod

    def from_rational(self, x: Fraction):
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.mod) % self.mod

    def add(self, x, y):
        return (x + y) % self.mod

    def mul(self, x, y):
        return (x * y) % self.mod

    def neg(self, x):
        return (-x) % self.mod

    def is_zero(self, x):
        return x % self.mod == 0

    def zero(self):
        return 0

    def one(self):
        return 1

    def teich(self, lam: int):
        return teichmuller_int(lam, self.p, self.M)

    def to_str(self, x):
        return str(x % self.mod)


class ResidueRing:
    """F_{p^f}; Teichmuller lifts of prime-field digits are the digits themselves."""

    def __init__(self, p: int, f: int = 1):
        self.p = p
        self.f = f
        self.field = residue_field(p, f)
        self.name = "fp" if f == 1 else f"fp{f}"

    def from_int(self, n: int):
        return self.field.from_int(n)

    def from_rational(self, x: Fraction):
        x = Fraction(x)
        return self.field.from_int(x.numerator) / self.field.from_int(x.denominator)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def is_zero(self, x):
        return x.is_zero()

    def zero(self):
        return self.field.zero()

    def one(self):
        return self.field.one()

    def teich(self, lam: int):
        return self.field.from_int(lam)

    def to_str(self, x):
        return self.field.to_literal(x)


# -- vertices -------------------------------------------------------------------


@dataclass(frozen=True)
class TreeVertex:
    """Canonical coset representative (p^a, c; 0, 1), c reduced mod p^a."""

    p: int
    a: int
    c: Fraction

    def matrix(self):
        return (Fraction(self.p) ** self.a, self.c, Fraction(0), Fraction(1))

    def distance(self) -> int:
        """Tree distance to the class of the identity (elementary divisors)."""
        vc = vp_fraction(self.c, self.p)
        e = min(0, self.a) if vc == INFTY else min(0, self.a, int(vc))
        return self.a - 2 * e

    def display(self) -> str:
        return f"(p^{self.a}, {self.c})"


def _reduce_mod_pa(p: int, y: Fraction, a: int) -> Fraction:
    """Canonical representative of y in Q_p / p^a Z_p with a finite tail."""
    y = Fraction(y)
    if y == 0 or vp_fraction(y, p) >= a:
        return Fraction(0)
    den = y.denominator
    m = 0
    while den % p == 0:
        den //= p
        m += 1
    # y = num / (den * p^m) with den prime to p
    mod = p ** (a + m)
    val = y.numerator * pow(den, -1, mod) % mod
    return Fraction(val, p ** m)


def normalize_coset(p: int, g) -> TreeVertex:
    """Canonical representative of the coset g * KZ.

    g is (x, y; z, w) with Fraction entries.  Column operations over Z_p
    (right multiplication by K) and central p-powers reduce g to
    (p^a, c; 0, 1); the discarded factor is recoverable via kz_factor.
    """
    x, y, z, w = (Fraction(t) for t in g)
    det = x * w - y * z
    if det == 0:
        raise SingularMatrix("matrix has determinant 0")
    # make the bottom row primitive via a central power of p
    m = min(vp_fraction(z, p), vp_fraction(w, p))
    scale = Fraction(p) ** int(-m) if m != INFTY else Fraction(1)
    x, y, z, w = x * scale, y * scale, z * scale, w * scale
    if vp_fraction(w, p) > 0:
        # bottom-right not a unit: swap columns (an element of K)
        x, y, z, w = y, x, w, z
    # kill z with an integral column operation, then scale the second column
    t = z / w
    x = x - t * y
    y, w = y / w, Fraction(1)
    # x is now p^a * unit: absorb the unit by scaling the first column only
    a = int(vp_fraction(x, p))
    c = _reduce_mod_pa(p, y, a)
    return TreeVertex(p, a, c)


def kz_factor(p: int, g, vertex: TreeVertex):
    """The k with g = vertex.matrix() * k; k = p^s * k0, k0 integral with
    unit determinant.  Returns (s, k0 entries as Fractions)."""
    x, y, z, w = (Fraction(t) for t in g)
    pa, c, _, _ = vertex.matrix()
    # inverse of ((pa, c), (0, 1)) is ((1/pa, -c/pa), (0, 1))
    k = (x / pa - c * z / pa, y / pa - c * w / pa, z, w)
    s = min(vp_fraction(t, p) for t in k if t != 0)
    k0 = tuple(t / Fraction(p) ** int(s) for t in k)
    det = k0[0] * k0[3] - k0[1] * k0[2]
    if min(vp_fraction(t, p) for t in k0 if t != 0) != 0 or vp_fraction(det, p) != 0:
        raise SingularMatrix("factor is not in KZ")
    return int(s), k0


# -- tree functions ----------------------------------------------------------------


class TreeFunction:
    """Finite formal sum of elementary functions [g, v], v in Sym^r."""

    def __init__(self, p: int, r: int, ring, support=None):
        self.p = p
        self.r = r
        self.ring = ring
        self.support = {}
        if support:
            for vertex, coeffs in support.items():
                self._accumulate(vertex, tuple(coeffs))

    def _accumulate(self, vertex: TreeVertex, coeffs):
        ring = self.ring
        if vertex in self.support:
            coeffs = tuple(ring.add(a, b) for a, b in zip(self.support[vertex], coeffs))
        if all(ring.is_zero(c) for c in coeffs):
            self.support.pop(vertex, None)
        else:
            self.support[vertex] = tuple(coeffs)

    @classmethod
    def elementary(cls, p: int, r: int, ring, coeffs, vertex: TreeVertex = None):
        """[g, v] at the given vertex (default: the base vertex)."""
        if len(coeffs) != r + 1:
            raise ValueError(f"need r+1 = {r + 1} coefficients")
        vertex = vertex if vertex is not None else TreeVertex(p, 0, Fraction(0))
        return cls(p, r, ring, {vertex: tuple(coeffs)})

    def __add__(self, other):
        out = TreeFunction(self.p, self.r, self.ring, self.support)
        for vertex, coeffs in other.support.items():
            out._accumulate(vertex, coeffs)
        return out

    def scale(self, scalar):
        ring = self.ring
        out = TreeFunction(self.p, self.r, self.ring)
        for vertex, coeffs in self.support.items():
            out._accumulate(vertex, tuple(ring.mul(scalar, c) for c in coeffs))
        return out

    def __neg__(self):
        return self.scale(self.ring.neg(self.ring.one()))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TreeFunction):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and self.support == other.support

    def is_zero(self):
        return not self.support

    def support_radius(self) -> int:
        """Max tree distance of the support from the base vertex (0 if empty)."""
        if not self.support:
            return 0
        return max(v.distance() for v in self.support)

    def __repr__(self):
        return f"TreeFunction(p={self.p}, r={self.r}, |support|={len(self.support)})"

    def to_json(self):
        rows = []
        for vertex in sorted(self.support, key=lambda v: (v.a, v.c)):
            rows.append({
                "a": vertex.a,
                "c": str(vertex.c),
                "distance": vertex.distance(),
                "coeffs": [self.ring.to_str(c) for c in self.support[vertex]],
            })
        return {"p": self.p, "r": self.r, "ring": self.ring.name, "support": rows}


def _subst_matrix(ring, r: int, a, b, c, d):
    """Matrix of P(X, Y) -> P(aX + cY, bX + dY) on Sym^r over `ring`
    (entries are ring elements), column-major."""
    cols = []
    for j in range(r + 1):
        left = _ring_binom_expand(ring, a, c, r - j)
        right = _ring_binom_expand(ring, b, d, j)
        col = [ring.zero()] * (r + 1)
        for m1, c1 in enumerate(left):
            for m2, c2 in enumerate(right):
                col[m1 + m2] = ring.add(col[m1 + m2], ring.mul(c1, c2))
        cols.append(col)
    return cols


def _ring_binom_expand(ring, u, v, n):
    out = []
    for m in range(n + 1):
        coef = ring.from_int(math.comb(n, m))
        term = ring.mul(coef, ring.mul(_ring_pow(ring, u, n - m), _ring_pow(ring, v, m)))
        out.append(term)
    return out


def _ring_pow(ring, x, n):
    out = ring.one()
    for _ in range(n):
        out = ring.mul(out, x)
    return out


def _apply_cols(ring, cols, coeffs):
    out = [ring.zero()] * len(cols[0])
    for j, cf in enumerate(coeffs):
        if ring.is_zero(cf):
            continue
        col = cols[j]
        for m, entry in enumerate(col):
            out[m] = ring.add(out[m], ring.mul(cf, entry))
    return tuple(out)


def apply_T(func: TreeFunction) -> TreeFunction:
    """The Hecke operator: T[g, v] = sum over digits lam of
    [g (p, [lam]; 0, 1), v(X, -[lam] X + p Y)] + [g (1, 0; 0, p), v(pX, Y)].

    Each summand's coset is renormalized and the discarded KZ factor is
    pushed onto the value (the higher Teichmuller digits of [lam] act
    through a unipotent on Sym^r, so truncating the lift at the ring's
    precision plus the support depth is exact).
    """
    p, r, ring = func.p, func.r, func.ring
    out = TreeFunction(p, r, ring)
    subst = []
    for lam in range(p):
        lift = ring.teich(lam)
        # X -> X, Y -> -[lam] X + p Y
        cols = _subst_matrix(ring, r, ring.one(), ring.neg(lift),
                             ring.zero(), ring.from_int(p))
        subst.append((lam, cols))
    down_cols = _subst_matrix(ring, r, ring.from_int(p), ring.zero(),
                              ring.zero(), ring.one())
    max_level = max((abs(v.a) for v in func.support), default=0)
    digits = max_level + getattr(ring, "M", 1) + 2
    lam_lift = {lam: Fraction(teichmuller_int(lam, p, digits)) for lam in range(p)}
    for vertex, coeffs in func.support.items():
        pa, c, _, _ = vertex.matrix()
        for lam, cols in subst:
            g = (pa * p, pa * lam_lift[lam] + c, Fraction(0), Fraction(1))
            value = _apply_cols(ring, cols, coeffs)
            out._accumulate(*_renormalized(p, r, ring, g, value))
        g = (pa, c * p, Fraction(0), Fraction(p))
        value = _apply_cols(ring, down_cols, coeffs)
        out._accumulate(*_renormalized(p, r, ring, g, value))
    return out


def _renormalized(p, r, ring, g, value):
    """Canonical vertex for g, with the KZ discrepancy applied to the value."""
    vertex = normalize_coset(p, g)
    _, k0 = kz_factor(p, g, vertex)
    if k0 == (Fraction(1), Fraction(0), Fraction(0), Fraction(1)):
        return vertex, value
    cols = _subst_matrix(ring, r,
                         ring.from_rational(k0[0]), ring.from_rational(k0[1]),
                         ring.from_rational(k0[2]), ring.from_rational(k0[3]))
    return vertex, _apply_cols(ring, cols, value)


def g_act(g, func: TreeFunction) -> TreeFunction:
    """Left translation g . [h, v] = [g h, v]; the KZ discrepancy of the
    renormalized coset acts on the value through Sym^r."""
    p, r, ring = func.p, func.r, func.ring
    g = tuple(Fraction(t) for t in g)
    out = TreeFunction(p, r, ring)
    for vertex, coeffs in func.support.items():
        pa, c, z0, w0 = vertex.matrix()
        prod = (g[0] * pa + g[1] * z0, g[0] * c + g[1] * w0,
                g[2] * pa + g[3] * z0, g[2] * c + g[3] * w0)
        out._accumulate(*_renormalized(p, r, ring, prod, coeffs))
    return out


def total_sum_functional(func: TreeFunction):
    """Sum of the values; degree 0 only."""
    if func.r != 0:
        raise WrongDegree("the sum functionals require r = 0")
    acc = func.ring.zero()
    for coeffs in func.support.values():
        acc = func.ring.add(acc, coeffs[0])
    return acc


def alternating_sum_functional(func: TreeFunction):
    """Sum weighted by (-1)^(distance from the base vertex); degree 0 only."""
    if func.r != 0:
        raise WrongDegree("the sum functionals require r = 0")
    acc = func.ring.zero()
    for vertex, coeffs in func.support.items():
        term = coeffs[0]
        if vertex.distance() % 2:
            term = func.ring.neg(term)
        acc = func.ring.add(acc, term)
    return acc


def support_radius(func: TreeFunction) -> int:
    return func.support_radius()
