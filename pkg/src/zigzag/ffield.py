"""Finite fields used for residue computations.

Two layers cover everything the package needs: the prime field F_p, and
iterated quadratic extensions built as F[g]/(g^2 - s) for s a non-square
in F.  The residue field F_{p^2} is realized canonically as
F_p[x]/(x^2 - q) with q the least quadratic non-residue mod p, and the
quadratic closure of any field in the tower adjoins a square root of its
least non-square (lexicographic on coefficient tuples).

Elements are immutable and hashable; literals follow the "c0+c1*x"
convention, with "z" for the generator of a second-level extension.
"""

from __future__ import annotations

import functools


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FFElem:
    """Element of a finite field in the tower; thin wrapper over raw data."""

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = data

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is self.field:
                return other
            # allow base-field elements inside an extension
            if isinstance(self.field, QuadraticField) and other.field is self.field.base:
                return self.field.embed(other)
            raise ValueError("elements of different fields")
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FFElem(self.field, self.field._add(self.data, o.data))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.field, self.field._neg(self.data))

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else FFElem(self.field, self.field._mul(self.data, o.data))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        return FFElem(self.field, self.field._inv(self.data))

    def is_zero(self) -> bool:
        return self.data == self.field.zero().data

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        if other.field is not self.field:
            if isinstance(self.field, QuadraticField) and other.field is self.field.base:
                other = self.field.embed(other)
            elif isinstance(other.field, QuadraticField) and self.field is other.field.base:
                return other == self
            else:
                return False
        return self.data == other.data

    def __hash__(self):
        return hash((id(self.field), self.data))

    def __repr__(self):
        return self.field.to_literal(self)

    def sort_key(self):
        """Deterministic total order key (nested coefficient tuples)."""
        return self.field._key(self.data)


class PrimeField:
    """F_p with elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.order = p
        self.degree = 1

    def from_int(self, n: int) -> FFElem:
        return FFElem(self, n % self.p)

    def zero(self):
        return FFElem(self, 0)

    def one(self):
        return FFElem(self, 1)

    def elements(self):
        for a in range(self.p):
            yield FFElem(self, a)

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def _key(self, a):
        return (a,)

    def frobenius(self, e: FFElem) -> FFElem:
        return e

    def to_literal(self, e: FFElem) -> str:
        return str(e.data)

    def from_literal(self, text: str) -> FFElem:
        return self.from_int(int(text))

    def __repr__(self):
        return f"GF({self.p})"


class QuadraticField:
    """Quadratic extension base[g]/(g^2 - s); elements are pairs over base."""

    def __init__(self, base, s: FFElem, symbol: str):
        if is_square(s):
            raise ValueError("s must be a non-square in the base field")
        self.base = base
        self.s = s
        self.symbol = symbol
        self.p = base.p
        self.order = base.order ** 2
        self.degree = base.degree * 2

    def from_int(self, n: int) -> FFElem:
        return FFElem(self, (self.base.from_int(n).data, self.base.zero().data))

    def embed(self, e: FFElem) -> FFElem:
        if e.field is not self.base:
            raise ValueError("embed expects a base-field element")
        return FFElem(self, (e.data, self.base.zero().data))

    def make(self, a: FFElem, b: FFElem) -> FFElem:
        """Element a + b*g from base-field coordinates."""
        return FFElem(self, (a.data, b.data))

    def coords(self, e: FFElem):
        return FFElem(self.base, e.data[0]), FFElem(self.base, e.data[1])

    def gen(self) -> FFElem:
        return FFElem(self, (self.base.zero().data, self.base.one().data))

    def zero(self):
        return FFElem(self, (self.base.zero().data, self.base.zero().data))

    def one(self):
        return FFElem(self, (self.base.one().data, self.base.zero().data))

    def elements(self):
        for a in self.base.elements():
            for b in self.base.elements():
                yield FFElem(self, (a.data, b.data))

    def _lift(self, d):
        return FFElem(self.base, d)

    def _add(self, a, b):
        return (self.base._add(a[0], b[0]), self.base._add(a[1], b[1]))

    def _neg(self, a):
        return (self.base._neg(a[0]), self.base._neg(a[1]))

    def _mul(self, a, b):
        # (a0 + a1 g)(b0 + b1 g) = a0 b0 + s a1 b1 + (a0 b1 + a1 b0) g
        a0, a1 = self._lift(a[0]), self._lift(a[1])
        b0, b1 = self._lift(b[0]), self._lift(b[1])
        re = a0 * b0 + self.s * (a1 * b1)
        im = a0 * b1 + a1 * b0
        return (re.data, im.data)

    def _inv(self, a):
        # 1/(a0 + a1 g) = (a0 - a1 g)/(a0^2 - s a1^2)
        a0, a1 = self._lift(a[0]), self._lift(a[1])
        norm = a0 * a0 - self.s * (a1 * a1)
        if norm.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ninv = norm.inverse()
        return ((a0 * ninv).data, (-a1 * ninv).data)

    def _key(self, a):
        return self.base._key(a[0]) + self.base._key(a[1])

    def frobenius(self, e: FFElem) -> FFElem:
        """The p-power Frobenius (computed by exponentiation)."""
        return e ** self.p

    def to_literal(self, e: FFElem) -> str:
        a, b = self.coords(e)
        if b.is_zero():
            return self.base.to_literal(a)
        astr, bstr = self.base.to_literal(a), self.base.to_literal(b)
        if "+" in bstr or "*" in bstr:
            bstr = f"({bstr})"
        if a.is_zero():
            return f"{bstr}*{self.symbol}"
        if "+" in astr or "*" in astr:
            astr = f"({astr})"
        return f"{astr}+{bstr}*{self.symbol}"

    def from_literal(self, text: str) -> FFElem:
        text = text.strip()
        a, b = _split_literal(text, self.symbol)
        a, b = _strip_parens(a), _strip_parens(b)
        return self.make(self.base.from_literal(a) if a else self.base.zero(),
                         self.base.from_literal(b) if b else self.base.zero())

    def __repr__(self):
        return f"GF({self.base.order}^2;{self.symbol}^2={self.base.to_literal(self.s)})"


def _split_literal(text: str, symbol: str):
    """Split "A+B*sym" into (A, B), respecting one level of parentheses."""
    # find the top-level '+' separating the two coordinates, scanning right to left
    depth = 0
    for i in range(len(text) - 1, -1, -1):
        ch = text[i]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
        elif ch == "+" and depth == 0 and text[i + 1:].strip().endswith(symbol):
            head, tail = text[:i], text[i + 1:]
            return head.strip(), _strip_sym(tail.strip(), symbol)
    if text.endswith(symbol):
        return "", _strip_sym(text, symbol)
    return text, ""


def _strip_parens(term: str) -> str:
    term = term.strip()
    while term.startswith("(") and term.endswith(")"):
        depth = 0
        balanced = True
        for i, ch in enumerate(term):
            depth += (ch == "(") - (ch == ")")
            if depth == 0 and i < len(term) - 1:
                balanced = False
                break
        if not balanced:
            break
        term = term[1:-1].strip()
    return term


def _strip_sym(term: str, symbol: str) -> str:
    term = term[: -len(symbol)].rstrip()
    if term.endswith("*"):
        term = term[:-1].rstrip()
    if term.startswith("(") and term.endswith(")"):
        term = term[1:-1]
    return term if term else "1"


def is_square(e: FFElem) -> bool:
    """Euler criterion in any finite field of odd order."""
    if e.is_zero():
        return True
    return (e ** ((e.field.order - 1) // 2)) == e.field.one()


@functools.lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod p (p odd)."""
    squares = {pow(a, 2, p) for a in range(1, p)}
    for q in range(2, p):
        if q not in squares:
            return q
    raise ValueError("no non-residue found (p must be an odd prime > 2)")


def least_nonsquare(field) -> FFElem:
    """First non-square in coefficient-lexicographic order."""
    for e in field.elements():
        if not e.is_zero() and not is_square(e):
            return e
    raise ValueError("field has no non-square")


def sqrt(e: FFElem) -> FFElem:
    """A square root via Tonelli-Shanks; raises ValueError for non-squares."""
    field = e.field
    q = field.order
    if e.is_zero():
        return e
    if not is_square(e):
        raise ValueError("element is not a square")
    if q % 4 == 3:
        return e ** ((q + 1) // 4)
    # write q - 1 = m * 2^k with m odd
    m, k = q - 1, 0
    while m % 2 == 0:
        m //= 2
        k += 1
    g = least_nonsquare(field) ** m  # order 2^k
    r = e ** ((m + 1) // 2)
    t = e ** m
    while t != field.one():
        # find least i with t^(2^i) = 1
        i, tt = 0, t
        while tt != field.one():
            tt = tt * tt
            i += 1
        b = g
        for _ in range(k - i - 1):
            b = b * b
        r = r * b
        t = t * b * b
        k = i
        g = b * b
    return r


@functools.lru_cache(maxsize=None)
def residue_field(p: int, f: int = 2):
    """The residue field F_{p^f}; only f in {1, 2} is supported."""
    if f == 1:
        return PrimeField(p)
    if f == 2:
        base = residue_field(p, 1)
        return QuadraticField(base, base.from_int(least_nonresidue(p)), "x")
    raise ValueError("residue degree must be 1 or 2")


@functools.lru_cache(maxsize=None)
def quadratic_closure(p: int, f: int = 2):
    """F_{p^{2f}} containing residue_field(p, f) as its base.

    For f = 1 this is residue_field(p, 2) itself (the least non-square of
    F_p is the least non-residue), so elements compare consistently.
    """
    if f == 1:
        return residue_field(p, 2)
    base = residue_field(p, f)
    return QuadraticField(base, least_nonsquare(base), "z")


def unit_norm_roots(d: FFElem):
    """Both roots of T^2 - d T + 1 over the quadratic closure of d's field.

    Returns a pair (lam, lam^{-1}), deterministically ordered.  Split roots
    stay in d's field (embedded); otherwise they live in the closure.
    d must belong to a canonical residue field (f = 1 or 2).
    """
    field = d.field
    if field is residue_field(field.p, 1):
        closure = quadratic_closure(field.p, 1)
    elif field is residue_field(field.p, 2):
        closure = quadratic_closure(field.p, 2)
    else:
        raise ValueError("d must lie in a canonical residue field")
    disc = d * d - 4
    two_inv = field.from_int(2).inverse()
    if is_square(disc):
        w = sqrt(disc)
        r1 = (d + w) * two_inv
        r2 = (d - w) * two_inv
        r1, r2 = closure.embed(r1), closure.embed(r2)
    else:
        # disc = s * (disc/s) with disc/s a square; sqrt(disc) = sqrt(disc/s) * g
        w = sqrt(disc / closure.s)
        r1 = closure.make(d * two_inv, w * two_inv)
        r2 = closure.make(d * two_inv, -w * two_inv)
    if r1.sort_key() > r2.sort_key():
        r1, r2 = r2, r1
    return r1, r2
