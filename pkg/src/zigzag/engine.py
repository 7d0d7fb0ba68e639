"""Regime dispatch and branch evaluation for predicted mod-p reductions.

Given (p, k, a_p) with positive slope, the engine derives the chotomy
parameters (b, tau, t, ...), decides which known theorem or conjecture
governs the point, walks the alternating irreducible/reducible case split
to a concrete label where the literature provides one, and runs the
consistency analyses: the local-constancy stress test, the small-weight
table, the caveat disks around those weights, the large-slope comparison,
the twist compatibility in the slope direction, and the parity scan.

Every computation is exact; rationals only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateT,
    InvalidWeight,
    NonPositiveSlope,
    NotInTable,
    SlopeOutOfRange,
    ZeroAp,
)
from .ffield import unit_norm_roots
from .padic import INF, PadicElement, binomial_valuation, alpha, vp_int
from .reps import GaloisRep, SymbolicUnit, induced, lam_inverse, reducible

# provenance labels for the source of each answer
THEOREM_FE = "THEOREM_FE"
THEOREM_BREUIL = "THEOREM_BREUIL"
THEOREM_BLZ = "THEOREM_BLZ"
THEOREM_BG09 = "THEOREM_BG09"
THEOREM_BG13 = "THEOREM_BG13"
THEOREM_BGR18 = "THEOREM_BGR18"
THEOREM_GR19 = "THEOREM_GR19"
CONJECTURE_ZIGZAG = "CONJECTURE_ZIGZAG"
KNOWN_ELSEWHERE = "KNOWN_ELSEWHERE"
CAVEAT_ZONE = "CAVEAT_ZONE"
UNKNOWN = "UNKNOWN"

THEOREMS = {THEOREM_FE, THEOREM_BREUIL, THEOREM_BLZ, THEOREM_BG09,
            THEOREM_BG13, THEOREM_BGR18, THEOREM_GR19}


@dataclass(frozen=True)
class EngineConfig:
    residue_degree: int = 2
    precision: int = 12
    caveat_exponent: int = 1          # s0: congruence depth of the caveat disks
    strict_conjecture: bool = True    # conjecture-only comparisons stay UNDECIDED
    exclude_ap: tuple = ("p^2",)      # slope-lag values, matched exactly


DEFAULT_CONFIG = EngineConfig()


@dataclass(frozen=True)
class ZigzagParams:
    p: int
    k: int
    r: int
    v: Fraction
    b: int
    n: int
    v_minus: int
    v_plus: int
    c: PadicElement
    tau: object   # Fraction or inf
    t: object     # Fraction or inf
    exceptional: bool


@dataclass(frozen=True)
class Branch:
    kind: str       # "irred" | "red"
    index: int      # j for irred (0..n), i for red (1..n)
    terminal: bool = False

    def descriptor(self) -> str:
        return f"{'IRRED' if self.kind == 'irred' else 'RED'}({self.index})"


@dataclass(frozen=True)
class Prediction:
    rep: object               # GaloisRep or None
    branch: object            # Branch or None
    provenance: str
    notes: tuple = ()
    params: object = None     # ZigzagParams when computable


def slope(ap: PadicElement):
    if ap.is_zero():
        raise ZeroAp("a_p = 0")
    v = ap.valuation(require_finite=True)
    if v <= 0:
        raise NonPositiveSlope(f"v(a_p) = {v} <= 0")
    return v


def exceptional_class(p: int, k: int, v) -> tuple:
    """(k = 2v+2 mod (p-1), b = 2v); slope must be half-integral in (0, (p-1)/2]."""
    v = Fraction(v)
    if not (0 < v <= Fraction(p - 1, 2)) or (2 * v).denominator != 1:
        raise SlopeOutOfRange(f"slope {v} not half-integral in (0, (p-1)/2]")
    b = int(2 * v)
    return (k - 2 * v - 2) % (p - 1) == 0, b


def _half_integral(v) -> bool:
    return v != INF and (2 * Fraction(v)).denominator == 1


def _slope_bounds(v: Fraction):
    """Largest/smallest integers v_-, v_+ with v strictly inside (v_-, v_+)."""
    if v.denominator == 2:
        return (v.numerator - 1) // 2, (v.numerator + 1) // 2
    return int(v) - 1, int(v) + 1


def compute_c(p: int, r: int, ap: PadicElement, v=None) -> PadicElement:
    """The chotomy parameter c = (a_p^2 - C(r-v_-, v_+) C(r-v_+, v_-) p^b) / (p a_p)."""
    w = slope(ap)
    if v is not None and Fraction(v) != w:
        raise ValueError(f"stated slope {v} does not match v(a_p) = {w}")
    v = Fraction(w)
    if (2 * v).denominator != 1:
        raise SlopeOutOfRange(f"slope {v} is not half-integral")
    b = int(2 * v)
    vm, vp_ = _slope_bounds(v)
    if r - vp_ < 0 or r - vm < vp_ or r - vp_ < vm:
        raise SlopeOutOfRange(f"weight r = {r} too small for slope {v}")
    B = math.comb(r - vm, vp_) * math.comb(r - vp_, vm)
    num = ap * ap - PadicElement.from_rational(p, ap.f, B * p ** b)
    return num / (ap * PadicElement.from_rational(p, ap.f, p))


def zigzag_params(p: int, k: int, ap: PadicElement, v=None) -> ZigzagParams:
    """All derived chotomy quantities; DegenerateT when both tau and t are infinite."""
    if k < 2:
        raise InvalidWeight(f"k = {k} < 2")
    r = k - 2
    w = Fraction(slope(ap))
    if (2 * w).denominator != 1:
        raise SlopeOutOfRange(f"slope {w} is not half-integral")
    b = int(2 * w)
    if not 1 <= b <= p - 1:
        raise SlopeOutOfRange(f"b = 2v = {b} outside 1..p-1")
    n = (b + 1) // 2
    vm, vp_ = _slope_bounds(w)
    c = compute_c(p, r, ap)
    tau = c.valuation(require_finite=True)
    t = vp_int(r - b, p)
    if tau == INF and t == INF:
        raise DegenerateT("r = b with a_p^2 = p^b: both parameters infinite")
    exceptional = (r - b) % (p - 1) == 0
    return ZigzagParams(p, k, r, w, b, n, vm, vp_, c, tau, t, exceptional)


def zigzag_branch(b: int, tau, t) -> Branch:
    """Locate tau in the alternating case split for residue class b.

    Boundaries are the integers t, t+1, ..., t+(n-1); reducible cases sit
    exactly on them.  For odd b = 2n-1 everything from t+(n-1) on is the
    terminal self-dual reducible case; for even b = 2n the boundary t+(n-1)
    is reducible and everything beyond is the terminal irreducible case.
    """
    if t == INF:
        raise DegenerateT("t is infinite (r = b)")
    n = (b + 1) // 2
    odd = b % 2 == 1
    if tau != INF and tau < t:
        return Branch("irred", 0)
    diff = INF if tau == INF else Fraction(tau) - Fraction(t)
    if diff != INF and diff.denominator == 1:
        j = int(diff)
        if odd:
            return Branch("red", min(j + 1, n), terminal=j >= n - 1)
        if j <= n - 1:
            return Branch("red", j + 1, terminal=j == n - 1)
        return Branch("irred", n, terminal=True)
    j = n if diff == INF else int(diff)  # floor for positive fractional diff
    if odd:
        if j <= n - 2:
            return Branch("irred", j + 1)
        return Branch("red", n, terminal=True)
    return Branch("irred", min(j + 1, n), terminal=j + 1 >= n)


def lambda_value(i: int, b: int, r: int, c: PadicElement, p: int = None):
    """The unramified constant for the i-th reducible case.

    Known cases: i = 1 (factor b/(b-r); a direct value for b >= 2, the
    trace of a unit-norm pair for b = 1) and i = 2 with b = 3 (trace
    (b-1)/((b-1-r)(b-r)) * c/p).  Everything else is a symbolic unknown.
    """
    if p is not None and p != c.p:
        raise ValueError("prime mismatch")
    p = c.p
    n = (b + 1) // 2
    trace_case = (b % 2 == 1 and i == n)
    if i == 1 and not trace_case:
        y = c * PadicElement.from_rational(p, c.f, Fraction(b, b - r))
        if y.valuation() != 0:
            return SymbolicUnit("*_1")
        return y.residue()
    if trace_case and b == 1:
        y = c * PadicElement.from_rational(p, c.f, Fraction(1, 1 - r))
        if y.valuation() != INF and y.valuation() < 0:
            return SymbolicUnit("*_1")
        lam, _ = unit_norm_roots(y.residue())
        return lam
    if trace_case and b == 3 and i == 2:
        factor = Fraction(b - 1) / ((b - 1 - r) * (b - r) * p)
        y = c * PadicElement.from_rational(p, c.f, factor)
        if y.valuation() != INF and y.valuation() < 0:
            return SymbolicUnit("*_2")
        lam, _ = unit_norm_roots(y.residue())
        return lam
    return SymbolicUnit(f"*_{i}")


def branch_rep(p: int, b: int, branch: Branch, lam) -> GaloisRep:
    """The label attached to a branch: ind(w2^{b+1+j(p-1)}) or
    mu_lam w^{b-i+1} + mu_{lam^{-1}} w^i (in that display order)."""
    if branch.kind == "irred":
        return induced(p, b + 1 + branch.index * (p - 1)).canonical()
    i = branch.index
    return reducible(p, b - i + 1, lam, i, lam_inverse(lam))


def berger_bound_holds(p: int, k: int, v) -> bool:
    """k > 3v + alpha(k-1) + 1, evaluated exactly."""
    return Fraction(k) > 3 * Fraction(v) + alpha(k - 1, p) + 1


def caveat_zone(p: int, r: int, v, s0: int = 1):
    """(True, m) when r is p-adically within the disk around a small weight
    b + m(p-1) with 0 < m <= v-1, at congruence depth p^{s0}(p-1)."""
    v = Fraction(v)
    b = int(2 * v)
    if (r - b) % (p - 1) != 0:
        raise SlopeOutOfRange("caveat test expects an exceptional weight class")
    big_m = (r - b) // (p - 1)
    mod = p ** s0
    m = 1
    while m <= v - 1:
        if big_m % mod == m % mod:
            return True, m
        m += 1
    return False, None


def _breuil_rows(p: int):
    return {
        (p + 2, Fraction(1, 2)),
        (p + 3, Fraction(1)),
        (p + 4, Fraction(3, 2)),
        (p + 5, Fraction(2)),
        (2 * p + 1, Fraction(1, 2)),
    }


def breuil_weight_reduction(p: int, k: int, ap: PadicElement) -> GaloisRep:
    """The tabulated small-weight reductions just above the first range.

    Rows: (p+2, 1/2) -> ind(w2^2); (p+3, 1) -> mu_lam w^2 + mu_{1/lam} w with
    lam = reduce(2 a_p / p); (p+4, 3/2) -> ind(w2^{p+3}); (p+5, 2) ->
    ind(w2^{p+4}); (2p+1, 1/2) branches on v(a_p^2 + p) against 3/2.
    """
    v = slope(ap)
    if (k, Fraction(v)) not in _breuil_rows(p):
        raise NotInTable(f"(k, v) = ({k}, {v}) not in the small-weight table for p = {p}")
    if k == p + 2:
        return induced(p, 2)
    if k == p + 3:
        lam = (ap * PadicElement.from_rational(p, ap.f, Fraction(2, p))).residue()
        return reducible(p, 2, lam, 1, lam.inverse())
    if k == p + 4:
        return induced(p, p + 3).canonical()
    if k == p + 5:
        return induced(p, p + 4).canonical()
    w = (ap * ap + PadicElement.from_rational(p, ap.f, p)).valuation()
    if w < Fraction(3, 2):
        return induced(p, 2)
    lam = SymbolicUnit("*_w")
    return reducible(p, 1, lam, 1, lam.inverse())


def classify_regime(p: int, k: int, ap: PadicElement,
                    cfg: EngineConfig = DEFAULT_CONFIG) -> str:
    """First applicable source for (p, k, a_p).

    The proven exceptional chotomies (slopes 1/2, 1, 3/2 with r > b) take
    precedence; then the large-slope theorem, the first weight range, the
    small-weight table (its slope-2 row lands in the caveat zone instead),
    the caveat disks, the remaining small-slope theorems, and finally the
    conjecture for exceptional half-integral slopes.
    """
    if k < 2:
        raise InvalidWeight(f"k = {k} < 2")
    v = slope(ap)
    r = k - 2
    half = _half_integral(v)
    b = int(2 * Fraction(v)) if half else None
    exceptional = (half and 1 <= b <= p - 1 and (r - b) % (p - 1) == 0)
    if exceptional and r > b:
        if v == Fraction(1, 2):
            return THEOREM_BG13
        if v == 1 and p >= 5:
            return THEOREM_BGR18
        if v == Fraction(3, 2) and p >= 5:
            return THEOREM_GR19
    if v > r // (p - 1):
        return THEOREM_BLZ
    if 2 <= k <= p + 1:
        return THEOREM_FE
    if (k, Fraction(v)) in _breuil_rows(p) and v < 2:
        return THEOREM_BREUIL
    if v >= 2 and exceptional and caveat_zone(p, r, v, cfg.caveat_exponent)[0]:
        return CAVEAT_ZONE
    if v < 1:
        return THEOREM_BG09
    if v == 1:
        return THEOREM_BGR18 if p >= 5 else UNKNOWN
    if v == Fraction(3, 2):
        return THEOREM_GR19 if p >= 5 else UNKNOWN
    if 1 < v < 2:
        return KNOWN_ELSEWHERE
    if exceptional:
        return CONJECTURE_ZIGZAG
    return UNKNOWN


def _excluded_ap_note(p: int, ap: PadicElement, cfg: EngineConfig):
    from .apexpr import parse_ap

    for text in cfg.exclude_ap:
        try:
            excluded = parse_ap(text, p, ap.f, cfg.precision).value
        except Exception:
            continue
        if ap == excluded:
            return (f"a_p = {text} is on the exclusion list: the reduction may lag "
                    "behind the predicted case here")
    return None


def predict(p: int, k: int, ap: PadicElement,
            cfg: EngineConfig = DEFAULT_CONFIG) -> Prediction:
    """Predicted semisimplified reduction with provenance and notes."""
    provenance = classify_regime(p, k, ap, cfg)
    v = Fraction(slope(ap))
    r = k - 2
    notes = []
    lag = _excluded_ap_note(p, ap, cfg)
    if lag:
        notes.append(lag)
    params = None
    if _half_integral(v) and 1 <= int(2 * v) <= p - 1 and r >= int(2 * v):
        try:
            params = zigzag_params(p, k, ap)
        except DegenerateT:
            notes.append("degenerate point: r = b with a_p^2 = p^b")
        except Exception:
            params = None

    if provenance in (THEOREM_BLZ, THEOREM_FE):
        return Prediction(induced(p, k - 1).canonical(), None, provenance,
                          tuple(notes), params)
    if provenance == THEOREM_BREUIL:
        return Prediction(breuil_weight_reduction(p, k, ap), None, provenance,
                          tuple(notes), params)
    if provenance == THEOREM_BG09:
        bb = (r - 1) % (p - 1) + 1
        return Prediction(induced(p, bb + 1).canonical(), None, provenance,
                          tuple(notes), params)
    if provenance == CAVEAT_ZONE:
        _, m = caveat_zone(p, r, v, cfg.caveat_exponent)
        notes.append(f"inside the caveat disk around the small weight b+{m}(p-1): "
                     "the chotomy is suppressed here (offending m = %d)" % m)
        if (k, v) in _breuil_rows(p):
            notes.append("weight sits in the small-weight table; using that value")
            return Prediction(breuil_weight_reduction(p, k, ap), None, CAVEAT_ZONE,
                              tuple(notes), params)
        return Prediction(None, None, CAVEAT_ZONE, tuple(notes), params)
    if provenance in (THEOREM_BG13, THEOREM_BGR18, THEOREM_GR19, CONJECTURE_ZIGZAG):
        if params is None or not params.exceptional:
            notes.append("slope is covered by this source but the non-exceptional "
                         "closed form is not carried here")
            return Prediction(None, None, provenance, tuple(notes), params)
        branch = zigzag_branch(params.b, params.tau, params.t)
        if branch.kind == "red":
            lam = lambda_value(branch.index, params.b, r, params.c)
        else:
            lam = None
        rep = branch_rep(p, params.b, branch, lam)
        if provenance == CONJECTURE_ZIGZAG:
            notes.append("conjectural: this case split is unproven for slopes above 3/2")
        return Prediction(rep, branch, provenance, tuple(notes), params)
    if provenance == KNOWN_ELSEWHERE:
        notes.append("slope in (1,2) away from 3/2: determined in the literature, "
                     "no closed form carried here")
        return Prediction(None, None, provenance, tuple(notes), params)
    return Prediction(None, None, UNKNOWN, tuple(notes), params)


@dataclass(frozen=True)
class LocalConstancyReport:
    base: Prediction
    k_near: int
    near: Prediction
    t_prime: int
    verdict: str  # COMPATIBLE | CONFLICT | UNDECIDED


def local_constancy_conflict(p: int, k: int, ap: PadicElement, t_prime: int,
                             cfg: EngineConfig = DEFAULT_CONFIG) -> LocalConstancyReport:
    """Compare the base prediction with the one at k' = k + p^{t'}(p-1).

    Constancy in the weight would force the two to agree on inertia once t'
    is large; a CONFLICT verdict means the predictions rule that out.
    """
    base = predict(p, k, ap, cfg)
    if base.provenance not in THEOREMS:
        raise ValueError("base weight must be in an explicitly known regime")
    k_near = k + p ** t_prime * (p - 1)
    near = predict(p, k_near, ap, cfg)
    if base.rep is None or near.rep is None:
        verdict = "UNDECIDED"
    elif cfg.strict_conjecture and near.provenance == CONJECTURE_ZIGZAG:
        verdict = "UNDECIDED"
    elif base.rep.equals_on_inertia(near.rep):
        verdict = "COMPATIBLE"
    else:
        verdict = "CONFLICT"
    return LocalConstancyReport(base, k_near, near, t_prime, verdict)


@dataclass(frozen=True)
class BlzReport:
    p: int
    b: int
    m: int
    slope: Fraction
    tau: object
    t: object
    kummer_valuation: int
    branch: Branch
    verdict: str      # CONSISTENT | INCONSISTENT
    boundary: bool    # b = p-1: the large-slope floor shifts by one here


def blz_consistency(p: int, b: int, m: int, f: int = 2) -> BlzReport:
    """Compare the chotomy against the large-slope theorem at r = b + m(p-1).

    For b = 2m+1 (slope m + 1/2) the case split reproduces the irreducible
    large-slope answer; for b = 2m+2 (slope m + 1) it lands on a reducible
    boundary case and the two disagree.  The divisibility p | C(r - v_+, v_-)
    that drives tau is certified by the carry-counting oracle.  At b = p-1
    the report carries the boundary flag: floor(r/(p-1)) is m+1 rather than
    m there, so the disagreement is with the extrapolated pattern only.
    """
    if m < 1 or m % p == 0:
        raise ValueError("m must be a positive integer prime to p")
    if b == 2 * m + 1:
        v = Fraction(2 * m + 1, 2)
        expected = "CONSISTENT"
    elif b == 2 * m + 2:
        v = Fraction(m + 1)
        expected = "INCONSISTENT"
    else:
        raise ValueError("b must be 2m+1 or 2m+2")
    if b > p - 1:
        raise SlopeOutOfRange(f"b = {b} exceeds p-1 = {p - 1}")
    r = b + m * (p - 1)
    ap = PadicElement.sqrt_p(p, f) ** int(2 * v)
    params = zigzag_params(p, r + 2, ap)
    vm, vp_ = params.v_minus, params.v_plus
    kv = binomial_valuation(r - vp_, vm, p)
    branch = zigzag_branch(b, params.tau, params.t)
    if b % 2:
        ok = (params.tau == v - 1 and params.t == 0 and kv >= 1
              and branch.kind == "irred" and branch.index == m)
        verdict = "CONSISTENT" if ok else "INCONSISTENT"
    else:
        integral = params.tau == m and params.t == 0 and kv >= 1
        verdict = "INCONSISTENT" if (integral and branch.kind == "red") else "CONSISTENT"
    if verdict != expected:
        raise AssertionError(
            f"internal check failed: expected {expected} at (p,b,m)=({p},{b},{m})")
    return BlzReport(p, b, m, v, params.tau, params.t, kv, branch, verdict,
                     boundary=b == p - 1)


def theta_compatibility(p: int, v, f: int = 2) -> bool:
    """Twisting the generic slope-v answer by omega gives the generic
    slope-(v+1) answer.

    Generic means t = 0 with tau at its minimal value v - 1 (and v for the
    next slope).  Evaluated formally through the case split, allowing
    b' = b + 2 up to p+1 since only exponent arithmetic enters.
    """
    v = Fraction(v)
    if (2 * v).denominator != 1 or not 0 < v <= Fraction(p - 1, 2):
        raise SlopeOutOfRange(f"slope {v} not half-integral in (0, (p-1)/2]")
    b = int(2 * v)
    b2 = b + 2
    lam = SymbolicUnit("*")
    br1 = zigzag_branch(b, v - 1, Fraction(0))
    rep1 = branch_rep(p, b, br1, lam)
    br2 = zigzag_branch(b2, v, Fraction(0))
    rep2 = branch_rep(p, b2, br2, lam)
    return rep1.twist_by_omega(1).equals_on_inertia(rep2)


def enumerate_branches(b: int):
    """Every case of the split for residue class b, in timeline order
    (b+1 of them: alternating, ending reducible for odd b and with the
    terminal irreducible case for even b)."""
    n = (b + 1) // 2
    out = [Branch("irred", 0)]
    for j in range(n - 1):
        out.append(Branch("red", j + 1))
        out.append(Branch("irred", j + 1))
    out.append(Branch("red", n, terminal=True))
    if b % 2 == 0:
        out.append(Branch("irred", n, terminal=True))
    return out


def irreducibility_conjecture_scan(p: int, k_range, slopes,
                                   cfg: EngineConfig = DEFAULT_CONFIG) -> list:
    """Hunt for predicted reducible labels with k even and fractional slope.

    Scans both the abstract case table (every b, every branch) and concrete
    predictions over the given weights and slopes.  Expected empty: the
    reducible cases only arise for even b, i.e. integral slope.
    """
    violations = []
    for b in range(1, p):
        k_parity_even = b % 2 == 0  # k = r+2 = b+2 mod 2 on exceptional classes
        v = Fraction(b, 2)
        for branch in enumerate_branches(b):
            if branch.kind == "red" and k_parity_even and v.denominator != 1:
                violations.append((p, b, branch))
    f = cfg.residue_degree
    pi = PadicElement.sqrt_p(p, f)
    units = [PadicElement.one(p, f), PadicElement.from_rational(p, f, 2)]
    if f >= 2:
        units.append(PadicElement.unit_gen(p, f))
    for k in k_range:
        if k % 2 or k < 2:
            continue
        for v in slopes:
            v = Fraction(v)
            if v.denominator == 1:
                continue
            for u in units:
                ap = u * pi ** int(2 * v)
                try:
                    pred = predict(p, k, ap, cfg)
                except (SlopeOutOfRange, DegenerateT):
                    continue
                if pred.rep is not None and pred.rep.kind == "red":
                    violations.append((p, k, v, pred))
    return violations
