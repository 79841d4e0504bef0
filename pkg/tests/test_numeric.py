from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from univoque import numeric as nm
from univoque.landmarks import golden, hat_q, komornik_loreti
from univoque.numeric import AlgebraicNumber, Ordering, QuadraticSurd, compare, enclose, exact_equal


def test_enclose_rational():
    iv = enclose(Fraction(1, 2), 10)
    assert iv.lo <= Fraction(1, 2) <= iv.hi
    assert iv.hi - iv.lo <= Fraction(1, 1 << 10)


def test_enclose_landmarks():
    g = enclose(golden().value, 20)
    assert g.lo <= Fraction(16180339, 10**7) + Fraction(1, 10**7) and g.hi >= Fraction(16180339, 10**7)
    assert g.hi - g.lo <= Fraction(1, 1 << 20)
    k = enclose(komornik_loreti().value, 20)
    assert abs(float(k.lo) - 1.78723) < 1e-5


def test_sign_of_poly_at():
    g = golden().value
    assert nm.sign_of_poly_at((1, -1, -1), g) == 0
    assert nm.sign_of_poly_at((1, -2), g) == -1


def test_compare_orderings():
    assert compare(Fraction(2, 3), Fraction(2, 3)) == Ordering.EQUAL
    assert compare(hat_q(2).value, hat_q(3).value) == Ordering.LESS
    assert compare(komornik_loreti().value, hat_q(4).value) == Ordering.GREATER


def test_surd_arithmetic_exact():
    v = (QuadraticSurd.sqrt(5) - 1) / 2
    assert v * v + v - 1 == 0


def test_nesting():
    v = komornik_loreti().value
    a, b = enclose(v, 40), enclose(v, 90)
    assert a.lo <= b.lo and b.hi <= a.hi


def test_precision_limit_and_env(monkeypatch):
    monkeypatch.setenv("UNIVOQUE_PRECISION_CAP", "300")
    assert nm.precision_cap() == 300
    with nm.precision_limit(128):
        assert nm.precision_cap() == 128
    monkeypatch.setenv("UNIVOQUE_PRECISION_CAP", "12")
    with pytest.raises(nm.DomainError):
        nm.precision_cap()


def test_simplify_quadratic():
    from univoque.expansions import solve_base

    assert nm.simplify(solve_base("(01)^inf", Fraction(1, 2))) == QuadraticSurd.sqrt(3)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-10, max_value=10), st.fractions(min_value=-10, max_value=10))
def test_compare_soundness_rationals(a, b):
    c = compare(a, b)
    expect = Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
    assert c == expect


def test_algebraic_equality_across_polynomials():
    r2 = AlgebraicNumber((1, 0, -2), 1, 2)
    r2_quartic = AlgebraicNumber((1, 0, -6, 0, 8), Fraction(5, 4), Fraction(3, 2))
    other = AlgebraicNumber((1, 0, -6, 0, 8), Fraction(7, 4), Fraction(5, 2))
    assert exact_equal(r2, r2_quartic)
    assert not exact_equal(r2, other)
    assert not exact_equal(r2_quartic, other)
