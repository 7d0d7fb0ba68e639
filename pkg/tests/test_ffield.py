import pytest

from zigzag.ffield import (
    is_square,
    least_nonresidue,
    least_nonsquare,
    quadratic_closure,
    residue_field,
    sqrt,
    unit_norm_roots,
)


def test_least_nonresidue():
    # frozen from direct enumeration of squares mod p
    assert least_nonresidue(3) == 2
    assert least_nonresidue(5) == 2
    assert least_nonresidue(7) == 3
    assert least_nonresidue(11) == 2
    assert least_nonresidue(13) == 2


def test_prime_field_arithmetic():
    F = residue_field(7, 1)
    a = F.from_int(3)
    b = F.from_int(5)
    assert (a + b) == 1
    assert (a * b) == 1
    assert (a - b) == 5
    assert a.inverse() * a == 1
    assert (a ** 6) == 1


def test_quadratic_field_basics():
    F = residue_field(5, 2)  # F_25 = F_5[x]/(x^2-2)
    x = F.gen()
    assert x * x == 2
    assert (x ** 24) == 1
    assert (x ** 12) != 1  # x is not a square in F_25 iff p = 1 mod 4; 5 = 1 mod 4
    for e in F.elements():
        if not e.is_zero():
            assert e * e.inverse() == 1


def test_inverse_pairs_exhaustive_f25():
    F = residue_field(5, 2)
    count = sum(1 for e in F.elements() if not e.is_zero())
    assert count == 24


def test_literal_roundtrip():
    F = residue_field(7, 2)
    for e in F.elements():
        assert F.from_literal(F.to_literal(e)) == e
    C = quadratic_closure(7, 2)
    shown = 0
    for e in C.elements():
        assert C.from_literal(C.to_literal(e)) == e
        shown += 1
        if shown > 400:
            break


def test_sqrt_all_squares():
    for p, f in [(5, 1), (7, 1), (5, 2), (7, 2), (11, 1)]:
        F = residue_field(p, f)
        for e in F.elements():
            if is_square(e):
                r = sqrt(e)
                assert r * r == e
            else:
                with pytest.raises(ValueError):
                    sqrt(e)


def test_least_nonsquare_is_nonsquare():
    for p, f in [(5, 1), (7, 2), (11, 1)]:
        F = residue_field(p, f)
        s = least_nonsquare(F)
        assert not is_square(s)


def test_unit_norm_roots_split():
    F = residue_field(5, 1)
    # d = 2: T^2 - 2T + 1 = (T-1)^2, double root 1
    r1, r2 = unit_norm_roots(F.from_int(2))
    assert r1 == 1 and r2 == 1
    # d = 0: T^2 + 1; -1 = 4 = 2^2 mod 5 so roots are +-2 in F_5
    r1, r2 = unit_norm_roots(F.from_int(0))
    assert {r1, r2} == {r1.field.from_int(2), r1.field.from_int(3)}
    assert r1 * r2 == 1


def test_unit_norm_roots_nonsplit():
    F = residue_field(7, 1)
    # d = 0: T^2 + 1 with -1 a non-residue mod 7: roots in F_49
    r1, r2 = unit_norm_roots(F.from_int(0))
    assert r1 * r1 == -1 + r1 * 0  # r1^2 = -1 in the closure
    assert r1 * r2 == 1
    assert r1 + r2 == 0


def test_unit_norm_roots_trace_and_norm():
    for p in (5, 7, 11):
        F = residue_field(p, 2)
        for d_int in range(p):
            d = F.from_int(d_int)
            r1, r2 = unit_norm_roots(d)
            assert r1 * r2 == 1
            assert r1 + r2 == d


def test_frobenius_fixes_prime_subfield():
    F = residue_field(7, 2)
    for n in range(7):
        e = F.from_int(n)
        assert F.frobenius(e) == e
    x = F.gen()
    assert F.frobenius(x) == -x  # conjugate of sqrt(q)
