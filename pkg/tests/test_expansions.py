from fractions import Fraction

import pytest

from univoque import numeric as nm
from univoque.expansions import (
    alpha, check_unique, evaluate, membership, quasi_greedy_digits, solve_base,
)
from univoque.landmarks import golden, hat_q, komornik_loreti
from univoque.numeric import QuadraticSurd
from univoque.words import TAU, EPSequence, lex_compare, tau_word

Q1_THETA = (1, -2, 0, 1, -1)  # q^4 - 2q^3 + q - 1


def _q1():
    return solve_base("0(1)^inf", (QuadraticSurd.sqrt(5) - 1) / 2)


def test_evaluate_basic():
    assert evaluate("0(1)^inf", 2) == Fraction(1, 2)
    assert evaluate("(10)^inf", 2) == Fraction(2, 3)


def test_evaluate_111000_at_q1():
    q1 = _q1()
    assert nm.sign_of_poly_at(Q1_THETA, q1) == 0
    assert nm.exact_equal(evaluate("(111000)^inf", q1), 1)


def test_solve_base_examples():
    assert nm.simplify(solve_base("(01)^inf", Fraction(1, 2))) == QuadraticSurd.sqrt(3)
    q1 = solve_base("0(1)^inf", Fraction(2, 3))
    assert nm.exact_equal(q1, (1 + QuadraticSurd.sqrt(7)) / 2)
    r2 = solve_base("10010(100100101100101100101)^inf", Fraction(2, 3))
    assert abs(float(nm.enclose(r2, 60).lo) - 1.83161199) < 5e-9


def test_inversion():
    d = EPSequence("101", "0110")
    x = Fraction(5, 7)
    q = solve_base(d, x)
    for bits in (32, 128, 512):
        iv = nm.enclose(evaluate(d, q), bits)
        assert iv.lo <= x <= iv.hi


def test_quasi_greedy_digits():
    assert quasi_greedy_digits(1, golden().value, 8).bits == "10101010"
    assert quasi_greedy_digits(1, komornik_loreti().value, 16).bits == tau_word(16)
    q1 = (1 + QuadraticSurd.sqrt(7)) / 2
    assert quasi_greedy_digits(1, q1, 22).bits == "1101100100101100011000"


def test_alpha_prefixes():
    assert alpha(Fraction(2)).prefix(10) == "1" * 10
    assert alpha(hat_q(2).value).prefix(12) == "110011001100"
    q2 = solve_base("1000(1)^inf", (QuadraticSurd.sqrt(5) - 1) / 2)
    assert alpha(q2).prefix(17) == "11100111001110000"


def test_alpha_period_detection():
    q1 = _q1()
    assert alpha(q1).detect_period() == EPSequence("", "111000")


def test_check_unique():
    assert str(check_unique(TAU, komornik_loreti().value, depth=256)) == "UniqueToDepth(256)"
    assert check_unique("(10)^inf", Fraction(17, 10)).unique
    v = check_unique("0(1)^inf", Fraction(19, 10), depth=8)
    assert v.violated and v.index == 1 and v.side == "0"


def test_membership():
    q2 = hat_q(2).value
    assert membership(q2, "V").exact_true
    assert membership(q2, "U_closure").certified_false
    assert membership(golden().value, "U").certified_false
    assert membership(komornik_loreti().value, "U", 512).kind == "no_violation_to_depth"


@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(3, 5), Fraction(7, 8)])
def test_monotone_in_base(x):
    qs_ = [Fraction(17, 10), Fraction(175, 100), Fraction(18, 10), Fraction(19, 10)]
    words = [quasi_greedy_digits(x, q, 64).bits for q in qs_]
    assert words == sorted(words) and len(set(words)) == len(words)


def test_monotone_in_x():
    q = Fraction(9, 5)
    xs = [Fraction(i, 10) for i in range(1, 10)]
    words = [quasi_greedy_digits(x, q, 64).bits for x in xs]
    assert words == sorted(words) and len(set(words)) == len(words)


def test_quasi_greedy_tail_condition():
    q = Fraction(9, 5)
    d = quasi_greedy_digits(Fraction(4, 7), q, 80).bits
    a = alpha(q).prefix(80)
    for i, c in enumerate(d):
        if c == "0":
            tail = d[i + 1:]
            assert tail <= a[:len(tail)]
