import random

from hypothesis import given, settings, strategies as st

from univoque.words import (
    TAU, BinaryWord, EPSequence, in_S, is_admissible, lex_compare, parse_sequence,
    reflect, s_count, s_elements, tau_word, thue_morse, word_minus, word_plus,
)


def test_thue_morse_prefix():
    assert thue_morse(0) == 0
    assert tau_word(16) == "1101001100101101"


def test_thue_morse_doubling():
    for n in range(1, 13):
        half = tau_word(1 << (n - 1))
        assert tau_word(1 << n) == half + word_plus(reflect(half))


def test_thue_morse_recursions():
    for i in range(1, 20000):
        assert thue_morse(2 * i) == thue_morse(i)
        assert thue_morse(2 * i + 1) == 1 - thue_morse(i)


def test_reflect():
    assert reflect("1101") == "0010"
    assert reflect(EPSequence("", "10")) == EPSequence("", "01")


def test_plus_minus():
    assert word_plus("1100") == "1101"
    assert word_minus("11") == "10"
    assert word_plus(reflect("1101")) == "0011"


def test_lex_compare():
    assert lex_compare(EPSequence("", "10"), EPSequence("", "10")).equal
    r = lex_compare(EPSequence("", "01"), EPSequence("", "10"))
    assert r.less and r.index == 1
    # the Thue-Morse sequence is below (1101)^inf: they first differ at index 5
    r = lex_compare(TAU, EPSequence("", "1101"))
    assert r.less and r.index == 5


def _naive(s, t, depth):
    for i in range(1, depth + 1):
        if s.digit(i) != t.digit(i):
            return "less" if s.digit(i) < t.digit(i) else "greater"
    return "equal"


@settings(max_examples=80, deadline=None)
@given(st.text("01", max_size=6), st.text("01", min_size=1, max_size=5),
       st.text("01", max_size=6), st.text("01", min_size=1, max_size=5))
def test_lex_compare_matches_naive(p1, c1, p2, c2):
    s, t = EPSequence(p1, c1), EPSequence(p2, c2)
    depth = 10 * (max(len(s.pre), len(t.pre)) + len(s.period) * len(t.period))
    assert lex_compare(s, t).kind == _naive(s, t, depth)


def test_ep_canonical_form():
    assert EPSequence("0010", "10") == EPSequence("0", "01")
    assert EPSequence("", "1010") == EPSequence("", "10")
    assert parse_sequence("10010(100100101100101100101)^inf") == \
        EPSequence("10010", "100100101100101100101")


def test_admissible():
    assert is_admissible("0")
    assert is_admissible("110")
    assert not is_admissible("11")


def test_set_s():
    assert s_elements(64) == [2, 3, 4, 8, 14, 15, 16, 26, 27, 28, 32, 50, 51, 52, 56, 62, 63, 64]
    assert all(in_S(1 << k) for k in range(1, 21))
    assert all(in_S((1 << (2 * k)) - 1) for k in range(1, 11))
    assert not in_S(1)


def _generated_S(limit):
    # build S upwards: each block (2^k, 2^(k+1)] is 3*2^(k-1) plus a member m <= 2^(k-1)
    out = {2, 3, 4}
    k = 2
    while (1 << k) < limit:
        out |= {3 * (1 << (k - 1)) + m for m in list(out) if m <= 1 << (k - 1)}
        k += 1
    return {n for n in out if n <= limit}


def test_in_S_matches_generated():
    limit = 1 << 14
    gen = _generated_S(limit)
    assert {n for n in range(1, limit + 1) if in_S(n)} == gen


def test_s_count_lucas():
    assert s_count(1) == 1 and s_count(2) == 3
    for k in range(3, 21):
        assert s_count(k) == s_count(k - 1) + s_count(k - 2)
    assert s_count(10) == 123
    total = sum(1 for n in range(1, 1025) if in_S(n))
    assert total == s_count(10)


def test_reflect_involution():
    rng = random.Random(5)
    for _ in range(50):
        w = "".join(rng.choice("01") for _ in range(rng.randint(1, 20)))
        assert reflect(reflect(w)) == w
