"""The semisimple mod-p dictionary between Galois labels and smooth
GL_2(Q_p) labels, the selection patterns for the filtration factors, and
the slope-3/2 nine-statement constraint set.

Smooth labels pi(r, lam, eta) name ind Sym^r / (T - lam) twisted by
eta o det; eta is stored as an omega-power plus an optional unramified
value.  The dictionary sends a supersingular-parameter label (lam = 0) to
an induced Galois label and a reducible Galois label to the semisimple sum
of two principal-series labels, the partner obtained through the bracket
[p-3-r].  Zero eigenvalues are stored as the integer 0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import engine as _engine
from .errors import MalformedLabel, NotInImage
from .ffield import FFElem
from .gammamod import GammaModuleLabel
from .padic import INF, PadicElement
from .reps import GaloisRep, SymbolicUnit, induced, lam_inverse, lam_key, lam_str, reducible


def bracket_normalize(p: int, x: int) -> int:
    """The canonical residue of x in {0, ..., p-2}."""
    return x % (p - 1)


@dataclass(frozen=True)
class SmoothRepLabel:
    """pi(r, lam, eta)^ss with eta = omega^eta_omega * mu_{eta_unramified}."""

    p: int
    r: int
    lam: object           # 0 (the int), FFElem, or SymbolicUnit
    eta_omega: int
    eta_unramified: object = None  # None = trivial

    def __post_init__(self):
        if not 0 <= self.r <= self.p - 1:
            raise MalformedLabel(f"r = {self.r} outside 0..p-1")

    def is_irreducible(self) -> bool:
        """False exactly for (r, lam) in {(0, +-1), (p-1, +-1)}."""
        if self.lam == 0 or isinstance(self.lam, SymbolicUnit):
            return True
        if self.r not in (0, self.p - 1):
            return True
        one = self.lam.field.one()
        return not (self.lam == one or self.lam == -one)

    def constituents(self):
        """Semisimplified pieces for the non-irreducible labels."""
        if self.is_irreducible():
            return (self.display(),)
        sign = "" if self.lam == self.lam.field.one() else "*mu(-1)"
        return (f"St{sign}", f"char{sign}")

    def sort_key(self):
        return (self.r, self.eta_omega,
                (0,) if self.lam == 0 else lam_key(self.lam))

    def display(self) -> str:
        lam = "0" if self.lam == 0 else lam_str(self.lam)
        eta = f"w^{self.eta_omega}"
        if self.eta_unramified is not None:
            eta += f"*mu({lam_str(self.eta_unramified)})"
        return f"pi({self.r},{lam},{eta})"

    def to_json(self) -> dict:
        return {"r": self.r,
                "lambda": "0" if self.lam == 0 else lam_str(self.lam),
                "eta_omega": self.eta_omega,
                "eta_unramified": (lam_str(self.eta_unramified)
                                   if self.eta_unramified is not None else "1")}


def ll_map(rep: GaloisRep):
    """Image of a Galois label under the dictionary, as a sorted tuple.

    ind(w2^{r+1}) x eta -> pi(r, 0, eta); mu_lam w^{r+1} + mu_{1/lam} (x eta)
    -> pi(r, lam, eta) + pi([p-3-r], 1/lam, eta w^{r+1}).  Symbolic
    eigenvalues pass through into the labels.
    """
    p = rep.p
    if rep.kind == "irred":
        rep.is_irreducible_label()
        c = rep.c % (p * p - 1)
        r1 = c % (p + 1)              # r + 1 in 1..p
        r = r1 - 1
        s = ((c - r1) // (p + 1)) % (p - 1)
        return (SmoothRepLabel(p, r, 0, s, rep.z),)
    s1, s2 = rep.canonical().summands
    lam1, lam2 = s1.lam, s2.lam
    if not isinstance(lam1, SymbolicUnit) and not isinstance(lam2, SymbolicUnit):
        if not (lam1 * lam2 == lam1.field.one()):
            raise NotInImage("summand eigenvalues must multiply to 1")
    r = (s1.a - s2.a - 1) % (p - 1)   # presentation exponent in 0..p-2
    eta = s2.a % (p - 1)
    partner_r = bracket_normalize(p, p - 3 - r)
    labels = [SmoothRepLabel(p, r, lam1, eta),
              SmoothRepLabel(p, partner_r, lam_inverse(lam1), (eta + r + 1) % (p - 1))]
    return tuple(sorted(labels, key=lambda l: l.sort_key()))


def ll_inverse(labels, p: int = None) -> GaloisRep:
    """The unique Galois preimage of a multiset of smooth labels."""
    labels = tuple(labels)
    if not labels:
        raise NotInImage("empty multiset")
    p = p if p is not None else labels[0].p
    if len(labels) == 1:
        (l,) = labels
        if l.lam != 0 and not (isinstance(l.lam, SymbolicUnit)):
            raise NotInImage("a single principal-series label has no preimage; "
                             "nonzero eigenvalues come in pairs")
        if isinstance(l.lam, SymbolicUnit):
            raise NotInImage("symbolic single label")
        c = (l.r + 1) + l.eta_omega * (p + 1)
        return induced(p, c, l.eta_unramified).canonical()
    if len(labels) != 2:
        raise NotInImage("expected one or two labels")
    for l, m in (labels, labels[::-1]):
        if l.lam == 0 or m.lam == 0:
            continue
        if m.r != bracket_normalize(p, p - 3 - l.r):
            continue
        if (m.eta_omega - l.eta_omega - l.r - 1) % (p - 1) != 0:
            continue
        if isinstance(l.lam, SymbolicUnit) or isinstance(m.lam, SymbolicUnit):
            if m.lam != lam_inverse(l.lam):
                continue
        elif not (l.lam * m.lam == l.lam.field.one()):
            continue
        if l.eta_unramified is not None or m.eta_unramified is not None:
            raise NotInImage("unramified eta on principal-series pairs is not carried")
        a1 = (l.r + 1 + l.eta_omega) % (p - 1)
        a2 = l.eta_omega % (p - 1)
        return reducible(p, a1, l.lam, a2, lam_inverse(l.lam)).canonical()
    raise NotInImage("labels do not form a dictionary pair")


def supersingular_equivalence(p: int, r: int, eta_omega: int,
                              r2: int, eta_omega2: int) -> bool:
    """Whether pi(r, 0, w^s) and pi(r2, 0, w^{s2}) share their Galois preimage."""
    n = p * p - 1
    c1 = ((r + 1) + eta_omega * (p + 1)) % n
    c2 = ((r2 + 1) + eta_omega2 * (p + 1)) % n
    return {c1, c1 * p % n} == {c2, c2 * p % n}


# -- selection patterns -----------------------------------------------------------


@dataclass(frozen=True)
class TPoly:
    """Linear T - lam, or quadratic T^2 - d T + 1."""

    kind: str            # "linear" | "quadratic"
    lam: object = None
    d: object = None

    def admits(self, lam) -> bool:
        if self.kind == "linear":
            return _eig_eq(lam, self.lam)
        if lam == 0 or isinstance(lam, SymbolicUnit):
            return False
        return lam + lam.inverse() == self.d

    def display(self) -> str:
        if self.kind == "linear":
            return "T" if self.lam == 0 else f"T-({lam_str(self.lam)})"
        if self.d == 0 or (not isinstance(self.d, (int, SymbolicUnit)) and self.d.is_zero()):
            return "T^2+1"
        return f"T^2-({lam_str(self.d)})T+1"


def _eig_eq(x, y) -> bool:
    if x == 0 or y == 0:
        xz = x == 0 or (isinstance(x, FFElem) and x.is_zero())
        yz = y == 0 or (isinstance(y, FFElem) and y.is_zero())
        return xz and yz
    if isinstance(x, SymbolicUnit) or isinstance(y, SymbolicUnit):
        return x == y
    return x == y


@dataclass(frozen=True)
class FConstraint:
    zero: bool
    tpoly: TPoly = None   # None: contributes, polynomial unspecified

    @classmethod
    def vanishes(cls):
        return cls(zero=True)

    @classmethod
    def quotient_of(cls, tpoly=None):
        return cls(zero=False, tpoly=tpoly)


@dataclass(frozen=True)
class FPattern:
    """Constraint per factor index, plus either/or groups from the timeline."""

    constraints: tuple      # tuple of (index, FConstraint)
    or_groups: tuple = ()

    def get(self, index: int) -> FConstraint:
        for i, c in self.constraints:
            if i == index:
                return c
        return FConstraint.vanishes()

    def contributing(self):
        return tuple(i for i, c in self.constraints if not c.zero)


def jh_selection_table(b: int, offset) -> FPattern:
    """Which factors survive at a given position of tau relative to t.

    offset = tau - t (a Fraction, or inf).  Below t only F_1 survives; at
    integer marks t+j the pair (F_{2j+1}, F_{2j+2}); strictly between marks
    a single factor, F_{2j+2} or F_{2j+3}; past the last mark the terminal
    pattern, self-dual (F_b, F_b) for odd b, F_b or F_{b+1} for even b.
    """
    n = (b + 1) // 2
    odd = b % 2 == 1
    top_index = b if odd else b + 1
    cons = {i: FConstraint.vanishes() for i in range(top_index + 1)}
    groups = []
    if offset != INF:
        offset = Fraction(offset)
    if offset != INF and offset < 0:
        cons[1] = FConstraint.quotient_of()
    elif odd and (offset == INF or offset >= n - 1):
        cons[b] = FConstraint.quotient_of()
    elif not odd and (offset == INF or offset > n - 1):
        cons[b] = FConstraint.quotient_of()
        cons[b + 1] = FConstraint.quotient_of()
        groups.append(frozenset({b, b + 1}))
    elif offset.denominator == 1:
        j = int(offset)
        if not odd and j == n - 1:
            cons[b - 1] = FConstraint.quotient_of()
            cons[b] = FConstraint.quotient_of()
            cons[b + 1] = FConstraint.quotient_of()
            groups.append(frozenset({b, b + 1}))
        else:
            cons[2 * j + 1] = FConstraint.quotient_of()
            cons[2 * j + 2] = FConstraint.quotient_of()
    else:
        j = int(offset)
        cons[2 * j + 2] = FConstraint.quotient_of()
        cons[2 * j + 3] = FConstraint.quotient_of()
        groups.append(frozenset({2 * j + 2, 2 * j + 3}))
    return FPattern(tuple(sorted(cons.items())), tuple(groups))


def gr19_constraints(p: int, r: int, ap: PadicElement) -> FPattern:
    """The nine-statement constraint set at slope 3/2, specialized to
    the region containing tau.

    Around t: tau > t kills F_1; at tau = t, F_1 and F_2 are quotients of
    ind J_1 / (T - 1/lam_1) and ind J_2 / (T - lam_1); tau < t kills F_2.
    Around t + 1/2: above kills F_2, at the mark F_2 and F_3 are quotients
    of ind J / T, below kills F_3.  Around t + 1: above, F_3 through
    T^2 + 1; at the mark, T^2 - dT + 1; below, T.
    """
    if p < 5:
        raise ValueError("needs p >= 5")
    b = 3
    if r <= b:
        raise ValueError("needs r > 3")
    params = _engine.zigzag_params(p, r + 2, ap)
    if params.b != 3:
        raise ValueError("slope must be 3/2")
    tau, t = params.tau, params.t
    half = Fraction(1, 2)
    cons = {0: FConstraint.vanishes()}

    def vanish(i):
        cons[i] = FConstraint.vanishes()

    def quot(i, tpoly):
        if i not in cons or not cons[i].zero:
            cons[i] = FConstraint.quotient_of(tpoly)

    # around t
    if tau > t:
        vanish(1)
    elif tau == t:
        lam1 = _engine.lambda_value(1, b, r, params.c)
        quot(1, TPoly("linear", lam=lam_inverse(lam1)))
        quot(2, TPoly("linear", lam=lam1))
    else:
        vanish(2)
    # around t + 1/2
    if tau > t + half:
        vanish(2)
    elif tau == t + half:
        quot(2, TPoly("linear", lam=0))
        quot(3, TPoly("linear", lam=0))
    else:
        vanish(3)
    # around t + 1
    if tau > t + 1:
        quot(3, TPoly("quadratic", d=ap.residue_field().zero()))
    elif tau == t + 1:
        dval = (params.c * PadicElement.from_rational(
            p, ap.f, Fraction(b - 1, (b - 1 - r) * (b - r) * p))).residue()
        quot(3, TPoly("quadratic", d=dval))
    else:
        quot(3, TPoly("linear", lam=0))
    for i in range(4):
        cons.setdefault(i, FConstraint.quotient_of())
    return FPattern(tuple(sorted(cons.items())))


def llc_cross_check(prediction, pattern: FPattern, jh_labels) -> bool:
    """Whether the dictionary image of a prediction fits a selection pattern.

    Every smooth label must land in some permitted slot: the factor index i
    is permitted when the pattern does not kill it, the label matches
    J_i = V_m D^s (directly, or through supersingular equivalence for
    lam = 0), and the slot's T-polynomial admits the eigenvalue.  Slots with
    quadratic polynomials must receive an inverse-closed set of eigenvalues,
    and one or two factors contribute in total.
    """
    rep = getattr(prediction, "rep", prediction)
    if rep is None:
        return False
    p = rep.p
    labels = ll_map(rep)
    used = set()
    quad_hits = {}
    for label in labels:
        allowed = []
        for idx, J in enumerate(jh_labels):
            con = pattern.get(idx)
            if con.zero:
                continue
            if _label_matches(p, label, J, con.tpoly):
                allowed.append(idx)
                if con.tpoly is not None and con.tpoly.kind == "quadratic":
                    quad_hits.setdefault(idx, []).append(label.lam)
        if not allowed:
            return False
        used.update(allowed)
    for idx, lams in quad_hits.items():
        for lam in lams:
            if lam == 0 or isinstance(lam, SymbolicUnit):
                return False
            if not any(other == lam.inverse() for other in lams):
                return False
    return 1 <= len(used) <= 2


def _label_matches(p: int, label: SmoothRepLabel, J: GammaModuleLabel, tpoly) -> bool:
    direct = (label.r == J.m and (label.eta_omega - J.s) % (p - 1) == 0)
    if direct:
        return tpoly is None or tpoly.admits(label.lam)
    if label.lam == 0 and (tpoly is None or (tpoly.kind == "linear" and tpoly.lam == 0)):
        return supersingular_equivalence(p, label.r, label.eta_omega, J.m, J.s)
    return False
