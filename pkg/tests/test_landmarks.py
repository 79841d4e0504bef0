from fractions import Fraction

import pytest

from univoque import numeric as nm
from univoque.expansions import alpha, evaluate, solve_base
from univoque.landmarks import (
    NoMatch, NotAdmissible, admissible_words, catalog_match, de_vries_komornik, get,
    golden, hat_q, hat_q_n_of, komornik_loreti, q_max, theta, tribonacci,
)
from univoque.numeric import Ordering, QuadraticSurd, compare
from univoque.words import EPSequence, reflect, tau_word, word_plus


def _close(v, target, tol):
    iv = nm.enclose(v, 80)
    return abs(float(iv.lo) - target) < tol


def test_golden_and_kl():
    assert _close(golden().value, 1.6180339, 1e-7)
    assert _close(komornik_loreti().value, 1.78723, 1e-5)
    assert alpha(komornik_loreti().value).prefix(16) == tau_word(16)


def test_hat_q_values():
    assert nm.exact_equal(hat_q(1).value, golden().value)
    for n, v in [(2, 1.754877), (3, 1.784599), (4, 1.787207)]:
        # the quoted decimals are sometimes truncated and sometimes rounded
        assert _close(hat_q(n).value, v, 1e-6)


def test_hat_q_increasing_certified():
    kl = komornik_loreti().value
    for n in range(1, 8):
        assert compare(hat_q(n).value, hat_q(n + 1).value) == Ordering.LESS
        assert compare(hat_q(n + 1).value, kl) == Ordering.LESS


def test_hat_q_increasing_by_alpha_order():
    # alpha is strictly increasing in q, so ordering the quasi-greedy forms
    # (tau_1 .. tau_2^n -)^inf lexicographically orders the bases
    for n in range(1, 13):
        a = hat_q(n).alpha_form
        b = hat_q(n + 1).alpha_form
        L = 1 << 14
        pa = EPSequence.parse(a).prefix(L)
        pb = EPSequence.parse(b).prefix(L)
        assert pa < pb < tau_word(L)


def test_theta():
    assert theta("0", 16) == tau_word(16)
    assert theta("1100", 8) == "11010011"
    for a in ("0", "110", "1100", "11010"):
        for m in (2 * len(a), 4 * len(a)):
            t = theta(a, m)
            assert theta(a, 2 * m) == t + word_plus(reflect(t))


def test_not_admissible():
    with pytest.raises(NotAdmissible):
        de_vries_komornik("11")


def test_de_vries_komornik():
    assert de_vries_komornik("0") is komornik_loreti()
    assert _close(de_vries_komornik("110").value, 1.87064, 1e-5)
    assert _close(hat_q_n_of("110", 1).value, 1.86675, 2e-5)
    for n in (1, 2, 3):
        assert nm.exact_equal(hat_q_n_of("0", n).value, hat_q(n).value)


def test_q_max():
    q = q_max().value
    iv = nm.enclose(q, 40)
    assert iv.lo <= Fraction(1888453328, 10**9) + Fraction(1, 10**9)
    assert iv.hi >= Fraction(1888453328, 10**9)
    x = 1 / golden().value
    for d in ("1(0010001100011)^inf", "100(1000110001100)^inf"):
        assert nm.exact_equal(evaluate(d, q), x)


def test_tribonacci():
    q = tribonacci().value
    assert nm.exact_equal(q ** 3, q ** 2 + q + 1)


def test_catalog_match():
    kl = komornik_loreti().value
    x = evaluate("0(1)^inf", kl)
    assert catalog_match(solve_base("0(1)^inf", x)).name == "qKL"
    assert catalog_match(hat_q(2).value).name == "qhat(2)"
    assert not catalog_match(solve_base("0(1)^inf", Fraction(2, 3)))
    assert isinstance(catalog_match(solve_base("0(1)^inf", Fraction(2, 3))), NoMatch)


def test_get_names():
    assert get("qhat(3)") is hat_q(3)
    assert get('dvk("110")') is de_vries_komornik("110")
    with pytest.raises(KeyError):
        get("nope")


def test_admissible_word_counts():
    words = admissible_words(8)
    counts = [sum(1 for w in words if len(w) == m) for m in range(1, 9)]
    assert counts == [1, 1, 1, 2, 3, 5, 9, 16]
