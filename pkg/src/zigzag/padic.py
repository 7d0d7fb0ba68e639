"""Exact arithmetic in a ramified quadratic extension of Q_{p^f}.

The ambient field is E = Q_{p^f}(pi) with pi^2 = p, so valuations (with
v(p) = 1) live in (1/2)Z.  The residue field F_{p^f} is the canonical one
from `ffield` (f = 2: F_p[x]/(x^2 - q), q the least non-residue), and the
coordinate generator theta lifting x satisfies theta^2 = q, which makes
theta a root of unity and hence its own Teichmuller representative.

Elements come in two flavors:

* exact: coordinates are rationals over the basis {theta^i, theta^i*pi}.
  Sums, products and quotients stay in this form, and the valuation is
  the minimum over coordinate valuations (the basis residues are
  F_p-independent, so coordinates never cancel against each other).
* truncated: pi^shift * U with U a unit known modulo pi^dprec (integer
  coordinates).  These arise from Teichmuller lifts of digits that are
  not roots of unity with rational theta-coordinates, and from mixing
  with such elements.  Precision propagates through arithmetic; total
  cancellation yields the distinguished zero-to-precision state, which
  is never silently treated as an exact zero.

The module also houses the combinatorial valuation helpers (Kummer carry
counting, the local-constancy exponent sum alpha) and the filtered
phi-module container.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidWeight, PrecisionExhausted, ZeroAp
from .ffield import FFElem, least_nonresidue, residue_field

INF = math.inf

DEFAULT_PRECISION = 12  # pi-digits


def vp_int(n: int, p: int):
    """p-adic valuation of an integer; inf for 0."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(x, p: int):
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def binomial_valuation(n: int, j: int, p: int) -> int:
    """v_p(C(n, j)) by Kummer: carries when adding j and n-j in base p."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    a, b = j, n - j
    carries = carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def alpha(n: int, p: int) -> int:
    """Sum over j >= 1 of floor(n / (p^{j-1} (p-1)))."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = 0
    d = p - 1
    while n // d:
        total += n // d
        d *= p
    return total


def teichmuller_int(lam: int, p: int, M: int) -> int:
    """Teichmuller lift of lam mod p as an integer mod p^M (fixed point of t -> t^p)."""
    mod = p ** M
    t = lam % mod
    for _ in range(M):
        t = pow(t, p, mod)
    return t


# -- coordinate helpers over W = Z[theta]/(theta^2 - q) ----------------------
# Length-f tuples (f = 1 or 2); the routines serve Fraction and int coords.


def _uadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _uneg(u):
    return tuple(-a for a in u)


def _umul(u, v, q):
    if len(u) == 1:
        return (u[0] * v[0],)
    return (u[0] * v[0] + q * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _uscale(c, u):
    return tuple(c * a for a in u)


def _uzero(f):
    return (0,) * f


def _pair_mul(a1, b1, a2, b2, p, q):
    """(A1 + B1 pi)(A2 + B2 pi) as a coordinate pair."""
    a = _uadd(_umul(a1, a2, q), _uscale(p, _umul(b1, b2, q)))
    b = _uadd(_umul(a1, b2, q), _umul(b1, a2, q))
    return a, b


def _pair_pi_shift(a, b, w, p):
    """(A + B pi) * pi^w for integer w >= 0, integral coordinates."""
    for _ in range(w):
        a, b = _uscale(p, b), a
    return a, b


def _wmul_mod(u, v, q, mod):
    return ((u[0] * v[0] + q * u[1] * v[1]) % mod, (u[0] * v[1] + u[1] * v[0]) % mod)


def _teich_coords(coords, p, q, k):
    """Teichmuller lift in W = Z[theta]/(p^k, theta^2 - q) by Frobenius iteration."""
    mod = p ** k
    t = tuple(c % mod for c in coords)
    for _ in range(k):
        acc = (1, 0)
        base = t
        n = p * p
        while n:
            if n & 1:
                acc = _wmul_mod(acc, base, q, mod)
            base = _wmul_mod(base, base, q, mod)
            n >>= 1
        t = acc
    return t


def _frac_mod(x, mod: int, p: int) -> int:
    """x mod `mod` for a rational with denominator prime to p."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError("denominator not prime to p; factor out the valuation first")
    return x.numerator * pow(x.denominator, -1, mod) % mod


class PadicElement:
    """Element of Q_{p^f}(sqrt p), exact or truncated.

    Exact: (a, b) Fraction coordinate pair over W meaning A + B*pi.
    Truncated: value = pi^shift * (A + B*pi) with integer coordinates,
    where A + B*pi is a unit known modulo pi^dprec, or the
    zero-to-precision state (all coordinates zero, dprec = 0, with
    `shift` recording the absolute precision).
    """

    __slots__ = ("p", "f", "q", "a", "b", "exact", "shift", "dprec")

    def __init__(self, p, f, a, b, exact=True, shift=0, dprec=None):
        self.p = p
        self.f = f
        self.q = least_nonresidue(p) if f == 2 else 0
        self.a = tuple(a)
        self.b = tuple(b)
        self.exact = exact
        self.shift = shift
        self.dprec = INF if exact else dprec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rational(cls, p, f, value) -> "PadicElement":
        value = Fraction(value)
        a = (value,) + (Fraction(0),) * (f - 1)
        return cls(p, f, a, (Fraction(0),) * f)

    @classmethod
    def zero(cls, p, f) -> "PadicElement":
        return cls.from_rational(p, f, 0)

    @classmethod
    def one(cls, p, f) -> "PadicElement":
        return cls.from_rational(p, f, 1)

    @classmethod
    def sqrt_p(cls, p, f) -> "PadicElement":
        b = (Fraction(1),) + (Fraction(0),) * (f - 1)
        return cls(p, f, (Fraction(0),) * f, b)

    @classmethod
    def unit_gen(cls, p, f) -> "PadicElement":
        """theta, the Teichmuller lift of the residue-field generator (f = 2)."""
        if f < 2:
            raise ValueError("the unit generator requires residue degree 2")
        return cls(p, f, (Fraction(0), Fraction(1)), (Fraction(0), Fraction(0)))

    @classmethod
    def from_coords(cls, p, f, a, b) -> "PadicElement":
        return cls(p, f, tuple(Fraction(c) for c in a), tuple(Fraction(c) for c in b))

    @classmethod
    def _truncated(cls, p, f, a, b, shift, dprec):
        """Normalize integer-coordinate data pi^shift (A + B pi) mod pi^{shift+dprec}."""
        if dprec <= 0:
            return cls(p, f, _uzero(f), _uzero(f), exact=False, shift=shift + max(dprec, 0), dprec=0)
        v = _int_pair_val(a, b, p)
        if v == INF or 2 * v >= dprec:
            return cls(p, f, _uzero(f), _uzero(f), exact=False, shift=shift + dprec, dprec=0)
        w = int(2 * v)
        for _ in range(w):
            # (A + B pi)/pi = B + (A/p) pi  (A divisible by p here)
            a, b = b, tuple(x // p for x in a)
        dprec = dprec - w
        khigh = (dprec + 1) // 2
        klow = dprec // 2
        mod_a = p ** khigh
        mod_b = p ** klow if klow else 1
        a = tuple(int(x) % mod_a for x in a)
        b = tuple(int(x) % mod_b for x in b)
        return cls(p, f, a, b, exact=False, shift=shift + w, dprec=dprec)

    # -- structure ------------------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, PadicElement):
            raise TypeError("expected a PadicElement")
        if (self.p, self.f) != (other.p, other.f):
            raise ValueError("elements live over different fields")

    def residue_field(self):
        return residue_field(self.p, self.f)

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.exact and all(c == 0 for c in self.a + self.b)

    def is_zero_to_precision(self) -> bool:
        return self.valuation() == INF

    @property
    def precision(self):
        """Remaining pi-digit precision (inf when exact; 0 when zero-to-precision)."""
        return self.dprec

    @property
    def abs_precision(self):
        """The element is known modulo pi^abs_precision."""
        if self.exact:
            return INF
        return self.shift + self.dprec

    def valuation(self, require_finite: bool = False):
        """Normalized valuation (v(p) = 1); +inf for exact zero and zero-to-precision.

        With require_finite=True a zero-to-precision element raises
        PrecisionExhausted; an exact zero still returns +inf.
        """
        if self.exact:
            best = INF
            for c in self.a:
                best = min(best, vp_fraction(c, self.p))
            for c in self.b:
                w = vp_fraction(c, self.p)
                if w != INF:
                    best = min(best, w + Fraction(1, 2))
            return best
        if self.dprec == 0:
            if require_finite:
                raise PrecisionExhausted(
                    "all stored digits cancelled; cannot certify a finite valuation")
            return INF
        return Fraction(self.shift, 2)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        self._check_compatible(other)
        if self.exact and other.exact:
            return PadicElement(self.p, self.f, _uadd(self.a, other.a), _uadd(self.b, other.b))
        aprec = min(self.abs_precision, other.abs_precision)
        x = self._as_truncated(aprec)
        y = other._as_truncated(aprec)
        base = min(x.shift, y.shift)
        xa, xb = _pair_pi_shift(x.a, x.b, x.shift - base, self.p)
        ya, yb = _pair_pi_shift(y.a, y.b, y.shift - base, self.p)
        return PadicElement._truncated(self.p, self.f, _uadd(xa, ya), _uadd(xb, yb),
                                       base, int(aprec) - base)

    __radd__ = __add__

    def __neg__(self):
        out = PadicElement(self.p, self.f, _uneg(self.a), _uneg(self.b),
                           exact=self.exact, shift=self.shift,
                           dprec=None if self.exact else self.dprec)
        return out if self.exact else PadicElement._truncated(
            self.p, self.f, out.a, out.b, out.shift, out.dprec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        self._check_compatible(other)
        q = self.q
        if self.exact and other.exact:
            a, b = _pair_mul(self.a, self.b, other.a, other.b, self.p, q)
            return PadicElement(self.p, self.f, a, b)
        if self.is_zero() or other.is_zero():
            return PadicElement.zero(self.p, self.f)
        vx, vy = self.valuation(), other.valuation()
        if vx == INF or vy == INF:
            # zero-to-precision times anything: only the precision moves
            zshift = int(self.abs_precision if vx == INF else other.abs_precision)
            wother = int(2 * (vy if vx == INF else vx))
            return PadicElement(self.p, self.f, _uzero(self.f), _uzero(self.f),
                                exact=False, shift=zshift + wother, dprec=0)
        dprec = min(self.precision, other.precision)
        x = self._as_unit_form(dprec)
        y = other._as_unit_form(dprec)
        a, b = _pair_mul(x.a, x.b, y.a, y.b, self.p, q)
        return PadicElement._truncated(self.p, self.f, a, b, x.shift + y.shift, int(dprec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        self._check_compatible(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicElement.one(self.p, self.f)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "PadicElement":
        q = self.q
        if self.exact:
            if self.is_zero():
                raise ZeroDivisionError("inverse of zero")
            # 1/(A + B pi) = (A - B pi) / (A^2 - p B^2), then invert in W
            norm = _uadd(_umul(self.a, self.a, q),
                         _uscale(-self.p, _umul(self.b, self.b, q)))
            if self.f == 1:
                ninv = (Fraction(1) / norm[0],)
            else:
                nn = norm[0] * norm[0] - q * norm[1] * norm[1]
                ninv = (norm[0] / nn, -norm[1] / nn)
            return PadicElement(self.p, self.f, _umul(self.a, ninv, q),
                                _uneg(_umul(self.b, ninv, q)))
        self.valuation(require_finite=True)
        k = (self.dprec + 1) // 2 + 1
        ia, ib = _unit_inverse_mod(self.a, self.b, self.p, q, k)
        return PadicElement._truncated(self.p, self.f, ia, ib, -self.shift, self.dprec)

    # -- internal conversions -----------------------------------------------------

    def _as_truncated(self, aprec):
        """Integer-coordinate view with absolute precision >= aprec."""
        if not self.exact:
            return self
        if self.is_zero():
            return PadicElement(self.p, self.f, _uzero(self.f), _uzero(self.f),
                                exact=False, shift=int(aprec), dprec=0)
        v = self.valuation()
        w = int(2 * v)
        dprec = max(int(aprec) - w, 1)
        return self._as_unit_form(dprec)

    def _as_unit_form(self, dprec):
        """pi^shift * unit with integer coordinates and >= dprec stored digits."""
        if not self.exact:
            return self
        v = self.valuation()
        w = int(2 * v)
        k = (int(dprec) + 1) // 2 + 1
        mod = self.p ** k
        unit = self * PadicElement.from_rational(self.p, self.f, Fraction(1, self.p)) ** ((w - (w % 2)) // 2)
        if w % 2:
            unit = unit * (PadicElement.sqrt_p(self.p, self.f).inverse())
        # unit now has valuation 0 and p-free denominators
        a = tuple(_frac_mod(c, mod, self.p) for c in unit.a)
        b = tuple(_frac_mod(c, mod, self.p) for c in unit.b)
        return PadicElement(self.p, self.f, a, b, exact=False, shift=w, dprec=int(dprec))

    # -- reduction and digits -------------------------------------------------------

    def residue(self) -> FFElem:
        """Image in F_{p^f}; requires valuation >= 0 (zero for positive valuation)."""
        v = self.valuation()
        F = self.residue_field()
        if v == INF:
            return F.zero()
        if v < 0:
            raise ValueError("residue of an element with negative valuation")
        if v > 0:
            return F.zero()
        x = self._as_unit_form(1) if self.exact else self
        ints = [c % self.p for c in x.a]
        if self.f == 1:
            return F.from_int(ints[0])
        return F.make(F.base.from_int(ints[0]), F.base.from_int(ints[1]))

    def digits(self, M: int):
        """First M Teichmuller digits of the unit part along powers of pi.

        Raises PrecisionExhausted when fewer than M digits are stored.
        """
        F = self.residue_field()
        if self.is_zero():
            return [F.zero()] * M
        self.valuation(require_finite=True)
        if self.precision < M:
            raise PrecisionExhausted(f"only {self.precision} digits available, {M} requested")
        k = (M + 1) // 2 + 2
        mod = self.p ** k
        x = self._as_unit_form(M + 2)
        ua = [c % mod for c in x.a]
        ub = [c % mod for c in x.b]
        out = []
        for _ in range(M):
            if self.f == 1:
                d = F.from_int(ua[0] % self.p)
                lift = (teichmuller_int(d.data, self.p, k),)
            else:
                d = F.make(F.base.from_int(ua[0] % self.p), F.base.from_int(ua[1] % self.p))
                lift = _teich_coords(tuple(ua), self.p, self.q, k)
            out.append(d)
            diff = tuple((c - t) % mod for c, t in zip(ua, lift))
            # (u - [d]) / pi = B + (diff/p) pi
            ua, ub = list(ub), [c // self.p for c in diff]
        return out

    # -- comparisons ------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_rational(self.p, self.f, other)
        if not isinstance(other, PadicElement):
            return NotImplemented
        if (self.p, self.f) != (other.p, other.f):
            return False
        if self.exact and other.exact:
            return self.a == other.a and self.b == other.b
        return (self - other).is_zero_to_precision()

    def __hash__(self):
        if not self.exact:
            raise TypeError("truncated p-adic elements are unhashable")
        return hash((self.p, self.f, self.a, self.b))

    def __repr__(self):
        if self.exact:
            return f"Padic({_pretty_coords(self.a, self.b)}; p={self.p})"
        if self.dprec == 0:
            return f"Padic(O(pi^{self.shift}); p={self.p})"
        return f"Padic(pi^{self.shift}*unit + O(pi^{self.shift + self.dprec}); p={self.p})"


def _int_pair_val(a, b, p):
    best = INF
    for c in a:
        best = min(best, vp_int(int(c), p))
    for c in b:
        w = vp_int(int(c), p)
        if w != INF:
            best = min(best, w + Fraction(1, 2))
    return best


def _pretty_coords(a, b):
    parts = []
    names = ["1", "x"]
    for c, n in zip(a, names):
        if c:
            parts.append(f"{c}" if n == "1" else f"{c}*{n}")
    for c, n in zip(b, names):
        if c:
            parts.append(f"{c}*pi" if n == "1" else f"{c}*{n}*pi")
    return " + ".join(parts) if parts else "0"


def _unit_inverse_mod(a, b, p, q, k):
    """Inverse of the unit A + B pi in O/(pi^{2k}); integer coordinates."""
    mod = p ** k
    if len(a) == 1:
        norm = (a[0] * a[0] - p * b[0] * b[0]) % mod
        ninv = pow(norm, -1, mod)
        return ((a[0] * ninv) % mod,), ((-b[0] * ninv) % mod,)
    aa = _wmul_mod(a, a, q, mod)
    bb = _wmul_mod(b, b, q, mod)
    norm = ((aa[0] - p * bb[0]) % mod, (aa[1] - p * bb[1]) % mod)
    n0, n1 = norm
    nn = (n0 * n0 - q * n1 * n1) % mod
    nninv = pow(nn, -1, mod)
    ninv = ((n0 * nninv) % mod, (-n1 * nninv) % mod)
    ia = _wmul_mod(a, ninv, q, mod)
    ib = _wmul_mod(tuple(-x for x in b), ninv, q, mod)
    return ia, ib


def valuation(x: PadicElement, require_finite: bool = False):
    """Module-level alias for PadicElement.valuation."""
    return x.valuation(require_finite=require_finite)


def padic_add(x: PadicElement, y: PadicElement) -> PadicElement:
    return x + y


def padic_mul(x: PadicElement, y: PadicElement) -> PadicElement:
    return x * y


def teichmuller(lam: FFElem, M: int = DEFAULT_PRECISION // 2):
    """Teichmuller lift of a residue-field element as a PadicElement mod p^M.

    Exact for 0 and +-1 (the only roots of unity with rational
    coordinates); otherwise truncated with 2M stored pi-digits.
    """
    field = lam.field
    p = field.p
    f = 1 if field.degree == 1 else 2
    if lam.is_zero():
        return PadicElement.zero(p, f)
    one = field.one()
    if lam == one:
        return PadicElement.one(p, f)
    if lam == -one:
        return -PadicElement.one(p, f)
    k = M
    if f == 1:
        a = (teichmuller_int(lam.data, p, k),)
    else:
        a = _teich_coords((lam.data[0], lam.data[1]), p, least_nonresidue(p), k)
    return PadicElement(p, f, a, _uzero(f), exact=False, shift=0, dprec=2 * k)


@dataclass(frozen=True)
class FilteredPhiModule:
    """Rank-2 filtered phi-module: phi(e1) = p^{k-1} e2, phi(e2) = -e1 + a_p e2,
    with the filtration jumping at k-1 along the line spanned by e1."""

    p: int
    k: int
    ap: PadicElement

    def __post_init__(self):
        if self.k < 2:
            raise InvalidWeight(f"weight k = {self.k} < 2")
        if self.ap.is_zero():
            raise ZeroAp("a_p = 0 is outside the positive-slope setup")

    def phi_matrix(self):
        """Rows of the matrix of phi in the basis (e1, e2)."""
        zero = PadicElement.zero(self.p, self.ap.f)
        one = PadicElement.one(self.p, self.ap.f)
        pk = PadicElement.from_rational(self.p, self.ap.f, self.p ** (self.k - 1))
        return ((zero, -one), (pk, self.ap))

    def det_valuation(self):
        m = self.phi_matrix()
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        return det.valuation()

    def filtration_jump(self) -> int:
        return self.k - 1


def is_positive_slope_irreducible(module: FilteredPhiModule) -> bool:
    """Whether the associated crystalline representation is irreducible.

    Equivalent to v(a_p) > 0: for v(a_p) = 0 the phi-eigenline with unit
    eigenvalue has Hodge and Newton numbers both 0, hence is a weakly
    admissible sub-line; for positive slope every phi-stable line has
    strictly positive Newton number against Hodge number 0.
    """
    if module.k < 2:
        raise InvalidWeight(f"weight k = {module.k} < 2")
    return module.ap.valuation() > 0
