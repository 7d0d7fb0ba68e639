"""Consistency suites behind `check --suite ...`.

Each suite returns a list of row dicts with an "ok" flag; a suite passes
when every row does.  Rows carry enough columns to render as a table or
as JSON.
"""

from __future__ import annotations

from fractions import Fraction

from .engine import (
    DEFAULT_CONFIG,
    blz_consistency,
    branch_rep,
    breuil_weight_reduction,
    enumerate_branches,
    irreducibility_conjecture_scan,
    local_constancy_conflict,
    predict,
    theta_compatibility,
)
from .gammamod import jh_sequence
from .llc import gr19_constraints, llc_cross_check
from .padic import PadicElement
from .reps import SymbolicUnit


def _fmt(x):
    if x is None:
        return ""
    return str(x)


def local_constancy_suite(p: int = 5, cfg=DEFAULT_CONFIG):
    """Constancy stress rows: failures at (4, p) and (5, p^(3/2)),
    compatibility at weight 3 with slope 1/2, each for t' in {1, 2, 3}."""
    f = cfg.residue_degree
    pi = PadicElement.sqrt_p(p, f)
    u = PadicElement.unit_gen(p, f) if f >= 2 else PadicElement.from_rational(p, f, 1)
    cases = [
        (4, PadicElement.from_rational(p, f, p), "p", "CONFLICT"),
        (5, pi ** 3, "p^(3/2)", "CONFLICT"),
        (3, u * pi, "u*p^(1/2)", "COMPATIBLE"),
    ]
    rows = []
    for k, ap, ap_text, expected in cases:
        for t_prime in (1, 2, 3):
            report = local_constancy_conflict(p, k, ap, t_prime, cfg)
            rows.append({
                "p": p, "k": k, "ap": ap_text, "t_prime": t_prime,
                "base": report.base.rep.display(),
                "near_k": report.k_near,
                "near": report.near.rep.display() if report.near.rep else "",
                "verdict": report.verdict,
                "expected": expected,
                "ok": report.verdict == expected,
            })
    return rows


def blz_suite(ps=(7, 11), ms=(1, 2), f: int = 2):
    """Large-slope comparison rows: b = 2m+1 consistent, b = 2m+2 not."""
    rows = []
    for p in ps:
        for m in ms:
            for b, expected in ((2 * m + 1, "CONSISTENT"), (2 * m + 2, "INCONSISTENT")):
                report = blz_consistency(p, b, m, f)
                rows.append({
                    "p": p, "b": b, "m": m, "slope": _fmt(report.slope),
                    "tau": _fmt(report.tau), "t": _fmt(report.t),
                    "kummer_v": report.kummer_valuation,
                    "branch": report.branch.descriptor(),
                    "boundary": report.boundary,
                    "verdict": report.verdict,
                    "expected": expected,
                    "ok": report.verdict == expected and report.kummer_valuation >= 1,
                })
    return rows


def breuil_suite(p: int = 5, t_prime: int = 2, cfg=DEFAULT_CONFIG):
    """k = 2p+1 dichotomy against the chotomy at a p-adically nearby weight.

    Samples slope-1/2 values a_p = alpha sqrt(p) on both sides of the
    v(a_p^2 + p) = 3/2 divide and compares on inertia.
    """
    f = cfg.residue_degree
    pi = PadicElement.sqrt_p(p, f)
    theta = PadicElement.unit_gen(p, f)
    side_low, side_high = [], []
    unit = 1
    while len(side_low) < 7 or len(side_high) < 7:
        if unit % p:
            target = side_high if (unit * unit + 1) % p == 0 else side_low
            if len(target) < 7:
                target.append((PadicElement.from_rational(p, f, unit), str(unit)))
        unit += 1
    alphas = side_low + side_high
    alphas += [(theta, "u"), (2 * theta, "2u"), (3 * theta, "3u"),
               (theta + PadicElement.from_rational(p, f, p), "u+p"),
               (PadicElement.from_rational(p, f, 1) + pi * p, "1+p*sqrt(p)"),
               (PadicElement.from_rational(p, f, 2) + pi, "2+sqrt(p)")]
    k = 2 * p + 1
    k_near = k + p ** t_prime * (p - 1)
    rows = []
    for alpha, name in alphas[:20]:
        ap = alpha * pi
        table_rep = breuil_weight_reduction(p, k, ap)
        near = predict(p, k_near, ap, cfg)
        w = (ap * ap + PadicElement.from_rational(p, f, p)).valuation()
        ok = near.rep is not None and table_rep.equals_on_inertia(near.rep)
        rows.append({
            "p": p, "alpha": name, "v(ap^2+p)": _fmt(w),
            "side": "reducible" if w >= Fraction(3, 2) else "irreducible",
            "table": table_rep.display(),
            "near_k": k_near,
            "near": near.rep.display() if near.rep else "",
            "ok": ok,
        })
    return rows


def theta_suite(ps=(7, 11), slopes=(Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2))):
    rows = []
    for p in ps:
        for v in slopes:
            ok = theta_compatibility(p, v)
            rows.append({"p": p, "v": _fmt(Fraction(v)), "compatible": ok, "ok": ok})
    return rows


def irreducibility_suite(cfg=DEFAULT_CONFIG):
    rows = []
    for p, k_max, slopes in ((7, 40, (Fraction(1, 2), Fraction(3, 2))),
                             (5, 50, (Fraction(1, 2), Fraction(3, 2)))):
        violations = irreducibility_conjecture_scan(p, range(2, k_max + 1), slopes, cfg)
        rows.append({
            "p": p, "k_max": k_max,
            "slopes": ",".join(str(s) for s in slopes),
            "violations": len(violations),
            "ok": not violations,
        })
    return rows


def determinant_suite(ps=(5, 7, 11)):
    """Inertial determinant = b+1 across the whole case table."""
    rows = []
    for p in ps:
        for b in range(1, p):
            ok = True
            for branch in enumerate_branches(b):
                lam = SymbolicUnit(f"*_{max(branch.index, 1)}")
                rep = branch_rep(p, b, branch, lam if branch.kind == "red" else None)
                if rep.inertial_determinant() != (b + 1) % (p - 1):
                    ok = False
            rows.append({"p": p, "b": b, "cases": len(enumerate_branches(b)), "ok": ok})
    return rows


def gr19_suite(cfg=DEFAULT_CONFIG):
    """Slope-3/2 predictions against the nine-statement constraints."""
    f = cfg.residue_degree
    rows = []
    for p, r, tag in [(5, 23, "theta"), (5, 23, "1+pi"), (7, 9, "1"),
                      (5, 19, "1+pi"), (5, 23, "1"), (7, 15, "1"),
                      (7, 15, "theta"), (5, 19, "2"), (5, 31, "1+pi"),
                      (7, 21, "1"), (11, 13, "1"), (11, 13, "theta")]:
        pi = PadicElement.sqrt_p(p, f)
        if tag == "theta":
            alpha = PadicElement.unit_gen(p, f)
        elif tag == "1+pi":
            alpha = PadicElement.from_rational(p, f, 1) + pi
        else:
            alpha = PadicElement.from_rational(p, f, int(tag))
        ap = alpha * pi ** 3
        pred = predict(p, r + 2, ap, cfg)
        pattern = gr19_constraints(p, r, ap)
        ok = llc_cross_check(pred, pattern, jh_sequence(p, 3))
        rows.append({
            "p": p, "r": r, "alpha": tag,
            "tau": _fmt(pred.params.tau), "t": _fmt(pred.params.t),
            "case": pred.branch.descriptor() if pred.branch else "",
            "rep": pred.rep.display() if pred.rep else "",
            "ok": ok,
        })
    return rows


SUITES = {
    "local-constancy": local_constancy_suite,
    "blz": blz_suite,
    "breuil": breuil_suite,
    "theta": theta_suite,
    "irreducibility": irreducibility_suite,
    "determinant": determinant_suite,
    "gr19": gr19_suite,
}


def run_suite(name: str, p: int = None, cfg=DEFAULT_CONFIG):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    if name == "local-constancy":
        return fn(p or 5, cfg)
    if name == "blz":
        return fn((p,) if p else (7, 11), f=cfg.residue_degree)
    if name == "breuil":
        return fn(p or 5, cfg=cfg)
    if name == "theta":
        return fn((p,) if p else (7, 11))
    if name == "determinant":
        return fn((p,) if p else (5, 7, 11))
    if name in ("irreducibility", "gr19"):
        return fn(cfg)
    return fn()
