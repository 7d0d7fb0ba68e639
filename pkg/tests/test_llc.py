from fractions import Fraction

import pytest

from zigzag import engine
from zigzag.errors import NotInImage
from zigzag.ffield import residue_field
from zigzag.gammamod import jh_sequence
from zigzag.llc import (
    SmoothRepLabel,
    bracket_normalize,
    gr19_constraints,
    jh_selection_table,
    ll_inverse,
    ll_map,
    llc_cross_check,
    supersingular_equivalence,
)
from zigzag.padic import PadicElement
from zigzag.reps import canonical_form, induced, reducible


def F(p):
    return residue_field(p, 2)


def elt(p, v, f=2):
    return PadicElement.from_rational(p, f, v)


def pi(p, f=2):
    return PadicElement.sqrt_p(p, f)


def test_bracket_normalize():
    assert bracket_normalize(7, 0) == 0
    assert bracket_normalize(7, -1) == 5
    assert bracket_normalize(5, -1) == 3
    assert bracket_normalize(7, 10) == 4


def test_ll_map_supersingular():
    (label,) = ll_map(induced(7, 4))
    assert (label.r, label.lam, label.eta_omega) == (3, 0, 0)


def test_ll_map_reducible_examples():
    p = 7
    lam = F(p).from_int(3)
    # mu_lam w^3 + mu_{1/lam} w -> pi(1, lam, w) + pi(3, 1/lam, w^3)
    rep = reducible(p, 3, lam, 1, lam.inverse())
    labels = ll_map(rep)
    got = {(l.r, l.eta_omega) for l in labels}
    assert got == {(1, 1), (3, 3)}
    by_r = {l.r: l for l in labels}
    assert by_r[1].lam == lam and by_r[3].lam == lam.inverse()
    # mu_lam w^2 + mu_{1/lam} w^2 -> two pi(p-2, ., w^2)
    rep = reducible(p, 2, lam, 2, lam.inverse())
    labels = ll_map(rep)
    assert all(l.r == p - 2 and l.eta_omega == 2 for l in labels)
    assert {str(l.lam.data) for l in labels} == {str(lam.data), str(lam.inverse().data)}


def test_ll_map_presentation_independent():
    p = 7
    lam = F(p).from_int(5)
    rep1 = reducible(p, 3, lam, 1, lam.inverse())
    rep2 = reducible(p, 1, lam.inverse(), 3, lam)
    assert ll_map(rep1) == ll_map(rep2)


def test_ll_inverse_examples():
    p = 7
    assert ll_inverse([SmoothRepLabel(p, 3, 0, 0)]) == induced(p, 4)
    lam = F(p).from_int(3)
    labels = [SmoothRepLabel(p, 1, lam, 1), SmoothRepLabel(p, 3, lam.inverse(), 3)]
    rep = ll_inverse(labels)
    assert rep == canonical_form(reducible(p, 3, lam, 1, lam.inverse()))
    with pytest.raises(NotInImage):
        ll_inverse([SmoothRepLabel(p, 0, F(p).one(), 0)])


def test_roundtrip_random():
    import random

    rng = random.Random(7)
    for p in (5, 7, 11):
        field = F(p)
        for _ in range(170):
            if rng.random() < 0.5:
                c = rng.randrange(p * p - 1)
                if c % (p + 1) == 0:
                    c += 1
                rep = induced(p, c)
            else:
                lam = field.from_int(rng.randrange(1, p))
                if rng.random() < 0.3:
                    lam = lam * field.gen()
                a1, a2 = rng.randrange(p - 1), rng.randrange(p - 1)
                rep = reducible(p, a1, lam, a2, lam.inverse())
            assert ll_inverse(ll_map(rep), p) == canonical_form(rep)


def test_injectivity_exhaustive_p5():
    p = 5
    field = residue_field(p, 1)
    seen = {}
    reps = []
    for c in range(p * p - 1):
        if c % (p + 1):
            reps.append(induced(p, c))
    for a1 in range(p - 1):
        for a2 in range(p - 1):
            for lam_int in range(1, p):
                lam = field.from_int(lam_int)
                reps.append(reducible(p, a1, lam, a2, lam.inverse()))
    for rep in reps:
        key = tuple(sorted((l.r, l.eta_omega, str(l.lam)) for l in ll_map(rep)))
        can = canonical_form(rep)
        if key in seen:
            assert seen[key] == can, f"distinct reps share the image: {key}"
        else:
            seen[key] = can


def test_dimension_bookkeeping():
    for p in (5, 7, 11):
        for r in range(p - 1):
            partner = bracket_normalize(p, p - 3 - r)
            assert ((r + 1) + (partner + 1)) % (p - 1) == (p - 1) % (p - 1)


def test_supersingular_equivalence():
    p = 7
    assert supersingular_equivalence(p, 1, 1, 5, 2)  # both give ind(w2^{p+3})
    assert supersingular_equivalence(p, 3, 0, 3, 0)
    assert not supersingular_equivalence(p, 1, 1, 3, 0)


def test_non_irreducible_labels_flagged():
    p = 7
    one = residue_field(p, 1).one()
    st = SmoothRepLabel(p, 0, one, 0)
    assert not st.is_irreducible()
    assert len(st.constituents()) == 2
    assert SmoothRepLabel(p, 0, -one, 0).constituents()[0].endswith("mu(-1)")
    assert SmoothRepLabel(p, p - 1, one, 0).is_irreducible() is False
    assert SmoothRepLabel(p, 2, one, 0).is_irreducible()
    assert SmoothRepLabel(p, 0, 0, 0).is_irreducible()


def test_jh_selection_table():
    pat = jh_selection_table(3, Fraction(-1))
    assert pat.contributing() == (1,)
    pat = jh_selection_table(3, Fraction(0))
    assert pat.contributing() == (1, 2)
    pat = jh_selection_table(3, Fraction(1, 2))
    assert set(pat.contributing()) == {2, 3}
    assert pat.or_groups == (frozenset({2, 3}),)
    pat = jh_selection_table(3, Fraction(1))
    assert pat.contributing() == (3,)
    pat = jh_selection_table(3, Fraction(9, 2))
    assert pat.contributing() == (3,)
    # even b = 4: terminal boundary pairs F_3 with F_5 or F_4
    pat = jh_selection_table(4, Fraction(1))
    assert set(pat.contributing()) == {3, 4, 5}
    assert pat.or_groups == (frozenset({4, 5}),)
    pat = jh_selection_table(4, Fraction(3, 2))
    assert set(pat.contributing()) == {4, 5}


def test_gr19_constraints_regions():
    p = 5
    # tau = t: r = 23, alpha = 1 + pi gives tau = t = 1 (frozen from params test)
    ap = (elt(p, 1) + pi(p)) * pi(p) ** 3
    pat = gr19_constraints(p, 23, ap)
    c1, c2 = pat.get(1), pat.get(2)
    assert not c1.zero and c1.tpoly.kind == "linear"
    assert not c2.zero and c2.tpoly.kind == "linear"
    assert pat.get(3).zero
    # tau = t + 1/2-type region: (7, 9, p^{3/2}) has tau - t = 1/2
    pat = gr19_constraints(7, 9, pi(7) ** 3)
    assert pat.get(1).zero
    assert pat.get(2).tpoly.display() == "T"
    assert pat.get(3).tpoly.display() == "T"
    # tau > t + 1: quadratic T^2 + 1
    pat = gr19_constraints(5, 23, pi(5) ** 3)  # alpha = 1: tau = 5/2 > t+1 = 2
    assert pat.get(3).tpoly.display() == "T^2+1"
    assert pat.get(1).zero and pat.get(2).zero
    # tau = t + 1: quadratic with computed trace
    ap = (elt(5, 1) + pi(5)) * pi(5) ** 3
    pat = gr19_constraints(5, 19, ap)
    tp = pat.get(3).tpoly
    assert tp.kind == "quadratic" and tp.d == residue_field(5, 2).from_int(2)


def test_llc_cross_check_tetrachotomy():
    # every slope-3/2 branch against the nine statements
    cases = [
        (5, 23, 2, "theta"),        # tau < t region via unit theta
        (5, 23, None, "onepi"),     # tau = t via 1 + pi
        (7, 9, 1, None),            # tau in (t, t+1)
        (5, 19, None, "onepi"),     # tau = t + 1
        (5, 23, 1, None),           # tau > t + 1
    ]
    for p, r, unit, tag in cases:
        f = 2
        if tag == "theta":
            alpha = PadicElement.unit_gen(p, f)
        elif tag == "onepi":
            alpha = elt(p, 1) + pi(p)
        else:
            alpha = elt(p, unit)
        ap = alpha * pi(p) ** 3
        pred = engine.predict(p, r + 2, ap)
        pat = gr19_constraints(p, r, ap)
        jh = jh_sequence(p, 3)
        assert llc_cross_check(pred, pat, jh), (p, r, tag, pred)


def test_llc_cross_check_supersingular_coincidence():
    # at tau = t + 1/2 the single supersingular label matches both T-slots
    p = 7
    ap = pi(p) ** 3
    pred = engine.predict(p, 11, ap)
    assert pred.rep == induced(p, 10)
    pat = gr19_constraints(p, 9, ap)
    jh = jh_sequence(p, 3)
    assert llc_cross_check(pred, pat, jh)
    # and the two slots are genuinely the same supersingular through the dictionary
    assert supersingular_equivalence(p, jh[2].m, jh[2].s, jh[3].m, jh[3].s)


def test_llc_cross_check_rejects_wrong_rep():
    p = 7
    ap = pi(p) ** 3
    pat = gr19_constraints(p, 9, ap)
    jh = jh_sequence(p, 3)
    wrong = induced(p, 4)  # the tau < t answer in a tau = t + 1/2 region
    assert not llc_cross_check(wrong, pat, jh)


def test_selection_table_consistent_with_nine_statements():
    # the coarse timeline's surviving factors contain the statements'
    # non-vanishing ones in every region, for b = 3
    p = 5
    cases = [
        (23, PadicElement.unit_gen(p, 2), Fraction(1, 2) - 1),  # lt: offset < 0
        (23, elt(p, 1) + pi(p), Fraction(0)),                   # eq
        (19, elt(p, 6), Fraction(1, 2)),                        # mid (tau=1/2, t=0)
        (19, elt(p, 1) + pi(p), Fraction(1)),                   # at t+1
        (23, elt(p, 1), Fraction(3, 2)),                        # hi
    ]
    for r, alpha, offset in cases:
        ap = alpha * pi(p) ** 3
        from zigzag.engine import zigzag_params

        prm = zigzag_params(p, r + 2, ap)
        table = jh_selection_table(3, Fraction(prm.tau) - Fraction(prm.t))
        nine = gr19_constraints(p, r, ap)
        for idx, con in nine.constraints:
            if not con.zero and con.tpoly is not None:
                assert idx in table.contributing(), (r, offset, idx)
