import random
from fractions import Fraction

import pytest

from univoque import numeric as nm
from univoque.expansions import alpha, check_unique, evaluate, membership, solve_base
from univoque.landmarks import golden, komornik_loreti
from univoque.numeric import Ordering, QuadraticSurd, compare
from univoque.qsolve import (
    Infinite, NotFound, QsOptions, TypeI, TypeII, TypeIIIBracket, Undetermined,
    check_result, classify, find_m, find_n, q_star, qs,
)
from univoque.words import TAU, EPSequence


def test_q_star():
    k, q = q_star(Fraction(2, 3))
    assert k == 1 and nm.exact_equal(q, (1 + QuadraticSurd.sqrt(7)) / 2)
    k, q = q_star(Fraction(39, 100))
    assert k == 2 and nm.exact_equal(q * q * (q - 1), Fraction(100, 39))
    k, q = q_star((QuadraticSurd.sqrt(5) - 1) / 2)
    assert k == 1 and nm.sign_of_poly_at((1, -2, 0, 1, -1), q) == 0


def test_q_star_domain():
    with pytest.raises(nm.DomainError):
        q_star(Fraction(3, 2))


def test_find_n_and_m():
    q1 = (1 + QuadraticSurd.sqrt(7)) / 2
    a = alpha(q1)
    assert find_n(a) == 6
    assert find_m(a, 6) == 12
    assert isinstance(find_n(TAU, n_cap=200), NotFound)


def test_find_n_theta():
    _, q1 = q_star((QuadraticSurd.sqrt(5) - 1) / 2)
    a = alpha(q1).detect_period()
    assert a == EPSequence("", "111000")
    assert find_n(a) == 4
    assert isinstance(find_m(a, 4), Infinite)


def test_two_thirds():
    res = qs(Fraction(2, 3))
    c = res.classification
    assert isinstance(c, TypeII) and c.step == 2
    assert c.expansion == EPSequence("10010", "100100101100101100101")
    assert [s.n for s in res.trace] == [6, 22]
    assert [s.m for s in res.trace] == [12, 24]
    assert str(res.trace[0].B) == "10010"
    assert check_result(res)


def test_trace_monotone():
    for x in (Fraction(72, 100), Fraction(84, 100), Fraction(39, 100), Fraction(5, 17)):
        res = qs(x)
        qk = [s.q for s in res.trace]
        rk = [s.r for s in res.trace]
        for a, b in zip(qk, qk[1:]):
            assert compare(a, b) == Ordering.LESS
        for a, b in zip(rk, rk[1:]):
            assert compare(a, b) != Ordering.LESS
        for s in res.trace:
            assert compare(s.q, s.r) == Ordering.LESS
            assert s.n >= 3


def test_bracket_equations():
    x = Fraction(72, 100)
    res = qs(x)
    head = ""
    for s in res.trace:
        d_q = EPSequence(head + "0", "1")
        d_r = EPSequence(head, str(s.B))
        assert nm.exact_equal(evaluate(d_q, s.q), x)
        assert nm.exact_equal(evaluate(d_r, s.r), x)
        head += str(s.B)


def test_type_two_not_in_V():
    res = qs(Fraction(2, 3))
    assert membership(res.q, "V").certified_false


def test_type_one():
    kl = komornik_loreti().value
    x = evaluate("0(1)^inf", kl)
    c = classify(x)
    assert isinstance(c, TypeI) and c.landmark is komornik_loreti()


def test_lower_bound_property():
    rng = random.Random(11)
    for _ in range(20):
        x = Fraction(rng.randint(1, 999), 1000)
        res = qs(x)
        lo, _ = res.bracket()
        _, q1 = q_star(x)
        assert compare(lo, q1) != Ordering.LESS
        assert compare(lo, golden().value) == Ordering.GREATER


def test_json_round_trip():
    import json

    res = qs(Fraction(84, 100))
    data = json.loads(json.dumps(res.to_json()))
    d = EPSequence.parse(data["expansion"])
    q = Fraction(data["q_s"]["lo"])
    hi = Fraction(data["q_s"]["hi"])
    # evaluating the emitted expansion over the emitted enclosure brackets x
    assert evaluate(d, hi) <= Fraction(84, 100) <= evaluate(d, q)


def _landmark_bracket(q):
    from univoque.landmarks import admissible_words, hat_q_n_of

    for a in admissible_words(6):
        for n in range(0, 4):
            lo, hi = hat_q_n_of(a, n).value, hat_q_n_of(a, n + 1).value
            if compare(lo, q) == Ordering.LESS and compare(q, hi) == Ordering.LESS:
                return lo
    return None


@pytest.mark.parametrize("x0", [Fraction(80, 100), Fraction(83, 100), Fraction(73, 100)])
def test_local_stability(x0):
    res = qs(x0)
    d = res.classification.expansion
    lo_base = _landmark_bracket(res.q)
    assert lo_base is not None
    x_plus = nm.enclose(evaluate(d, lo_base), 64).lo
    assert x_plus > x0
    for t in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        assert qs(x0 + (x_plus - x0) * t).classification.expansion == d


def test_undetermined_on_tiny_cap():
    from univoque.cascades import level_point

    x = level_point("x_n", 8).value
    res = qs(x, QsOptions(max_steps=3))
    assert isinstance(res.classification, (TypeIIIBracket, Undetermined))
    lo, hi = res.bracket()
    kl = nm.enclose(komornik_loreti().value, 64)
    assert nm.enclose(lo, 64).lo <= kl.lo and kl.hi <= nm.enclose(hi, 64).hi


def test_domain_error():
    with pytest.raises(nm.DomainError):
        qs(Fraction(-1, 2))
