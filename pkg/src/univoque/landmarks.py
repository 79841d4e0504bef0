"""Named bases: the golden ratio, the Komornik-Loreti constant, the Thue-Morse
ladder below it, de Vries-Komornik numbers and the maximum of the smallest
univoque base on (0, 1).

Every landmark is built once and cached, so identity (``is``) can be used to
recognize a base constructed from a landmark.  Membership flags are recorded
from known theorems rather than recomputed; ``None`` means unknown.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import numeric as nm
from .expansions import alpha, eval_interval
from .numeric import (
    AlgebraicNumber,
    DyadicInterval,
    RefinableConstant,
    is_exact,
)
from .words import (
    TAU,
    EPSequence,
    FunctionStream,
    is_admissible,
    reflect,
    tau_word,
    word_minus,
    word_plus,
)

HAT_Q_MAX_N = 20
DEFAULT_WORD_LENGTH = 16


class NotAdmissible(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Landmark:
    name: str
    value: object
    alpha_form: str
    in_U: bool | None
    in_U_closure: bool | None
    in_V: bool | None
    poly: tuple | None = None  # an integer polynomial vanishing at value
    series: str | None = None  # defining series when value is not algebraic
    notes: str = field(default="")

    def flags(self) -> dict:
        return {"U": self.in_U, "U_closure": self.in_U_closure, "V": self.in_V}

    def to_json(self, bits: int = 64) -> dict:
        iv = nm.enclose(self.value, bits)
        out = {
            "name": self.name,
            "enclosure": [str(iv.lo), str(iv.hi)],
            "decimal": nm.format_interval(iv, 18),
            "alpha": self.alpha_form,
            "flags": self.flags(),
        }
        if self.poly is not None:
            out["minpoly" if self.notes != "defining polynomial" else "poly"] = nm.format_poly(self.poly)
        if self.series is not None:
            out["series"] = self.series
        return out

    def __repr__(self):
        return f"Landmark({self.name})"


def _stream_root(stream, lo: Fraction, hi: Fraction, name: str, tag) -> RefinableConstant:
    """The base q in (lo, hi) with (stream)_q = 1, as a refinable constant."""

    def G(point: DyadicInterval, work: int) -> DyadicInterval:
        return eval_interval(stream, point, work) - 1

    state = {"iv": None}
    lock = threading.Lock()

    def refine(bits: int) -> DyadicInterval:
        with lock:
            cur = state["iv"]
            if cur is None:
                p = max(lo.denominator.bit_length(), hi.denominator.bit_length()) + 4
                cur = DyadicInterval(nm._floor_scaled(lo, p), nm._ceil_scaled(hi, p), p)
            if not cur.width_ok(bits):
                cur = nm.monotone_root(G, DyadicInterval(cur.a, cur.a, cur.prec),
                                       DyadicInterval(cur.b, cur.b, cur.prec), bits,
                                       cap=nm.precision_cap() + nm.GUARD_ALLOWANCE)
                state["iv"] = cur
            return cur

    return RefinableConstant(refine, tag=tag, name=name)


def _word_root(word: str, name: str) -> AlgebraicNumber:
    """The root in (1, 2) of q^L = sum w_i q^(L-i), L = len(word).

    The polynomial has one sign change, hence one positive root.  For long
    words a narrow isolator is found first by treating the word as a series,
    which is far cheaper than refining on the full polynomial.
    """
    poly = [1] + [-int(c) for c in word]
    if len(word) <= 1024:
        return AlgebraicNumber(poly, Fraction(1), Fraction(2), check=False, name=name)
    padded = FunctionStream(lambda i: int(word[i - 1]) if i <= len(word) else 0, word[:8] + "...")
    r = _stream_root(padded, Fraction(3, 2), Fraction(2), name, None)
    iv = r.enclose(96)
    return AlgebraicNumber(poly, iv.lo, iv.hi, check=False, name=name)


def _cyclotomic_quotient(n: int) -> tuple:
    """Defining polynomial of hat_q(n) divided by 1 + q + ... + q^(2^(n-1) - 1)."""
    p = [1] + [-int(c) for c in tau_word(1 << n)]
    half = 1 << (n - 1)
    num = list(p)
    out = []
    # long division by q^half - 1 after multiplying by q - 1
    num = nm.poly_mul(num, [1, -1])
    while len(num) - 1 >= half:
        c = num[0]
        out.append(c)
        num[half] += c
        num = num[1:]
    if any(num):
        raise ArithmeticError("cyclotomic factor does not divide")
    return nm.int_poly(out)


# ---------------------------------------------------------------------------
# constructors


@lru_cache(maxsize=None)
def golden() -> Landmark:
    q = AlgebraicNumber((1, -1, -1), 1, 2, name="q_G")
    q.set_known_minpoly((1, -1, -1))
    return Landmark("qG", q, "(10)^inf", False, False, True, poly=(1, -1, -1))


@lru_cache(maxsize=None)
def komornik_loreti() -> Landmark:
    q = _stream_root(TAU, Fraction(178, 100), Fraction(179, 100), "q_KL", ("landmark", "qKL"))
    return Landmark("qKL", q, "tau_1 tau_2 tau_3 ...", True, True, True,
                    series="sum tau_i q^-i = 1")


@lru_cache(maxsize=None)
def hat_q(n: int) -> Landmark:
    """Base with alpha = (tau_1..tau_{2^n} lowered)^inf."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > HAT_Q_MAX_N:
        raise ValueError(f"n is capped at {HAT_Q_MAX_N}")
    if n == 1:
        g = golden()
        return Landmark("qhat(1)", g.value, "(10)^inf", False, False, True, poly=g.poly)
    q = _word_root(tau_word(1 << n), f"qhat({n})")
    # the quotient is irreducible for every n checked (n <= 8); beyond that it
    # is only used as a polynomial with a single root in the isolator
    quot = _cyclotomic_quotient(n)
    if n <= 8:
        q.set_known_minpoly(quot)
        poly, note = quot, ""
    else:
        poly, note = None, ""
    return Landmark(f"qhat({n})", q, f"({tau_block_str(n)})^inf", False, False, True,
                    poly=poly, series=None if poly else f"(tau_1..tau_{1 << n})_q = 1", notes=note)


def tau_block_str(n: int) -> str:
    return word_minus(tau_word(1 << n))


def theta(a, length: int) -> str:
    """First ``length`` digits of the doubling sequence generated by ``a``.

    theta_1..theta_m = a+, and each block doubles the prefix by appending
    reflect(prefix)+.
    """
    a = str(a)
    _check_admissible(a)
    w = word_plus(a)
    while len(w) < length:
        w = w + word_plus(reflect(w))
    return w[:length]


def _check_admissible(a: str) -> None:
    if not a or set(a) - {"0", "1"}:
        raise NotAdmissible(f"not a binary word: {a!r}")
    if a[-1] != "0":
        raise NotAdmissible(f"word must end in 0: {a!r}")
    if not is_admissible(a):
        raise NotAdmissible(f"word is not admissible: {a!r}")


class _ThetaStream:
    def __init__(self, a: str):
        self.a = a
        self._w = theta(a, 64)
        self._lock = threading.Lock()

    def prefix(self, n: int) -> str:
        with self._lock:
            if len(self._w) < n:
                self._w = theta(self.a, max(n, 2 * len(self._w)))
            return self._w[:n]

    def digit(self, i: int) -> int:
        return int(self.prefix(i)[i - 1])

    def as_ep(self):
        return None

    def __repr__(self):
        return f"theta({self.a})"


@lru_cache(maxsize=8192)
def de_vries_komornik(a) -> Landmark:
    """Right endpoint of the basic interval generated by ``a``: alpha = theta(a)."""
    a = str(a)
    _check_admissible(a)
    if a == "0":
        return komornik_loreti()
    stream = _ThetaStream(a)
    lo = _bracket_for_word(theta(a, 64))
    q = _stream_root(stream, lo[0], lo[1], f"dvk({a})", ("landmark", "dvk", a))
    return Landmark(f"dvk({a})", q, f"theta({a})", True, True, True,
                    series=f"sum theta_i({a}) q^-i = 1")


def _bracket_for_word(w: str):
    """Dyadic (lo, hi) with (w 0^inf)_lo > 1 > (w 1^inf)_hi, bracketing every
    base whose alpha begins with w."""
    import numpy as np

    c = np.array([-1.0] + [float(d) for d in w][::-1])
    roots = [r.real for r in np.roots(c[::-1]) if abs(r.imag) < 1e-9 and 1 < r.real <= 2]
    guess = max(roots) if roots else 1.9
    width = Fraction(1, 1 << 12)
    g = Fraction(guess).limit_denominator(1 << 30)
    lo, hi = max(g - width, Fraction(1) + width), min(g + width, Fraction(2))
    while True:
        P = 48
        vlo = eval_interval(EPSequence(w, "0"), DyadicInterval.around(lo, P), P)
        vhi = eval_interval(EPSequence(w, "1"), DyadicInterval.around(hi, P), P)
        if vlo.lo > 1 and vhi.hi < 1:
            return lo, hi
        width *= 4
        lo, hi = max(g - width, Fraction(1) + Fraction(1, 64)), min(g + width, Fraction(2))


@lru_cache(maxsize=8192)
def hat_q_n_of(a, n: int) -> Landmark:
    """Base with alpha = (theta_1..theta_{2^n m} lowered)^inf, m = len(a)."""
    a = str(a)
    _check_admissible(a)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if a == "0":
        if n == 0:
            return Landmark("qhat_0(0)", Fraction(1), "0^inf", False, False, None,
                            notes="the degenerate base 1")
        return hat_q(n)
    L = len(a) << n
    w = theta(a, L)
    q = _word_root(w, f"qhat_{n}({a})")
    closure = None if n == 0 else False
    return Landmark(f"qhat_{n}({a})", q, f"({word_minus(w)})^inf", False, closure, True,
                    poly=q.poly, notes="defining polynomial")


@lru_cache(maxsize=None)
def tribonacci() -> Landmark:
    q = AlgebraicNumber((1, -1, -1, -1), Fraction(18, 10), 2, name="Q3")
    return Landmark("Q3", q, "(110)^inf", False, None, True, poly=(1, -1, -1, -1))


Q_MAX_POLY = (1, -1, -1, 0, -1, -2, 0, 0, -2, -3, -2, 0, -2, -5, -1, 0, -1, -3, -1, 0, 0, -1, -1, 0, 0, 0, 1)


@lru_cache(maxsize=None)
def q_max() -> Landmark:
    """Largest value of the smallest univoque base over x in (0, 1)."""
    q = AlgebraicNumber(Q_MAX_POLY, Fraction(18884533, 10 ** 7), Fraction(18884534, 10 ** 7), name="q_max")
    return Landmark("qmax", q, "computed on demand", False, False, False, poly=Q_MAX_POLY)


def get(name: str) -> Landmark:
    """Look up a landmark by its CLI name: qG, qKL, qhat(n), qmax, Q3, dvk(w), qhat_n(w)."""
    import re

    name = name.strip()
    simple = {"qG": golden, "qKL": komornik_loreti, "qmax": q_max, "Q3": tribonacci}
    if name in simple:
        return simple[name]()
    m = re.fullmatch(r"qhat\((\d+)\)", name)
    if m:
        return hat_q(int(m.group(1)))
    m = re.fullmatch(r"dvk\(\"?([01]+)\"?\)", name)
    if m:
        return de_vries_komornik(m.group(1))
    m = re.fullmatch(r"qhat_(\d+)\(\"?([01]+)\"?\)", name)
    if m:
        return hat_q_n_of(m.group(2), int(m.group(1)))
    raise KeyError(f"unknown landmark: {name}")


# ---------------------------------------------------------------------------
# catalog


@lru_cache(maxsize=None)
def admissible_words(max_length: int = DEFAULT_WORD_LENGTH) -> tuple:
    """Admissible words ending in 0, shortest first."""
    out = []
    for m in range(1, max_length + 1):
        for v in range(1 << m):
            w = format(v, f"0{m}b")
            if w[-1] == "0" and is_admissible(w):
                out.append(w)
    return tuple(out)


def catalog(max_word_length: int = 4, hat_n: int = HAT_Q_MAX_N) -> list:
    """Landmarks in a fixed order; word-generated ones for words up to max_word_length."""
    out = [golden(), komornik_loreti(), tribonacci(), q_max()]
    out += [hat_q(n) for n in range(2, hat_n + 1)]
    for w in admissible_words(max_word_length):
        if w == "0":
            continue
        out.append(de_vries_komornik(w))
        out += [hat_q_n_of(w, n) for n in range(0, 3)]
    return out


@dataclass(frozen=True)
class NoMatch:
    reason: str = ""

    def __bool__(self):
        return False


def catalog_match(q, tol_bits: int = 64, max_word_length: int = DEFAULT_WORD_LENGTH):
    """The landmark exactly equal to q, or NoMatch.

    Equality is never inferred from numeric closeness.  Refinable q matches
    only when it is the very object held by a landmark (bases solved from an
    expansion identity return that object).  Exact q is matched through its
    quasi-greedy expansion of 1: if that is certified purely periodic with
    period w-, q is the base solving (w)_q = 1, and w is tested against the
    doubling words theta(a).
    """
    q = nm.as_number(q)
    for lm in (golden(), komornik_loreti(), tribonacci(), q_max()):
        if q is lm.value:
            return lm
    if isinstance(q, RefinableConstant):
        tag = q.tag
        if tag and tag[0] == "landmark":
            return komornik_loreti() if tag[1] == "qKL" else de_vries_komornik(tag[2])
        return NoMatch("refinable value without a landmark identity")
    if not is_exact(q):
        return NoMatch("unsupported value")
    qi = nm.enclose(q, tol_bits)
    if qi.hi <= Fraction(3, 2) or qi.lo > 2:
        return NoMatch("outside the landmark range")
    for lm in (golden(), tribonacci(), q_max()):
        if not nm.enclose(lm.value, tol_bits).disjoint(qi) and nm.exact_equal(q, lm.value):
            return lm
    ep = alpha(q).detect_period(search=512)
    if ep is None or ep.pre or ep.period[-1] != "0":
        return NoMatch("alpha is not certified purely periodic")
    w = word_plus(ep.period)
    L = len(w)
    n = (L & -L).bit_length() - 1
    # largest doubling count first, so the shortest generating word wins
    for k in range(n, -1, -1):
        m = L >> k
        head = w[:m]
        if m > max_word_length or head[-1] != "1":
            continue
        a = word_minus(head)
        if is_admissible(a) and theta(a, L) == w:
            return hat_q_n_of(a, k)
    return NoMatch("alpha period is not a doubling word")


def export_json(path, max_word_length: int = DEFAULT_WORD_LENGTH, hat_n: int = HAT_Q_MAX_N,
                bits: int = 64) -> int:
    """Write the catalog to ``path`` as JSON; returns the number of entries."""
    entries = [lm.to_json(bits) for lm in catalog(max_word_length, hat_n)]
    with open(path, "w") as fh:
        json.dump(entries, fh, indent=1)
    return len(entries)


def describe(lm: Landmark, bits: int = 64) -> str:
    iv = nm.enclose(lm.value, bits)
    lines = [f"{lm.name}", f"  value   {nm.format_interval(iv, 20)}"]
    if lm.poly is not None:
        lines.append(f"  poly    {nm.format_poly(lm.poly)}")
    if lm.series:
        lines.append(f"  series  {lm.series}")
    lines.append(f"  alpha   {lm.alpha_form}")
    fl = {k: ("unknown" if v is None else str(v).lower()) for k, v in lm.flags().items()}
    lines.append(f"  flags   U={fl['U']} closure(U)={fl['U_closure']} V={fl['V']}")
    return "\n".join(lines)
