"""Closed forms on [1, inf) and on the cascades below q_KL, plus level points.

For n in S or n = 1, with 2^(k-1) < n <= 2^k (k = 0 for n = 1), and m > k:

    P = tau_n .. tau_{2^(m-1)}
    A = reflect(tau_1 .. tau_{2^(m-1)})+
    C = reflect(tau_1 .. tau_{2^m})+

    c_j   = P A^j C^inf        xi_{m,j} = (c_j)   at qhat(m)
    c_inf = P A^inf            xi_m     = (c_inf) at qhat(m)

On [xi_{m+1}, xi_m) the smallest univoque base solves (c_j)_q = x, where j
is the least index with x < xi_{m,j} (xi_{m,0} stands for xi_{m+1}).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from . import numeric as nm
from .expansions import check_unique, evaluate, solve_base
from .landmarks import (
    _ThetaStream,
    _check_admissible,
    de_vries_komornik,
    golden,
    hat_q,
    komornik_loreti,
    tribonacci,
    HAT_Q_MAX_N,
)
from .numeric import Ordering, PrecisionExhausted, compare, is_exact
from .words import (
    TAU,
    EPSequence,
    ShiftedStream,
    in_S,
    reflect,
    tau_word,
    thue_morse,
    word_minus,
    word_plus,
)


class NotInClosedFormRegion(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


J_CAP = 1 << 16


def _k_of(n: int) -> int:
    return 0 if n == 1 else (n - 1).bit_length()


@dataclass(frozen=True)
class CascadeContext:
    n: int
    m: int
    j: int | None = None  # None stands for j = infinity

    def __post_init__(self):
        if self.n < 1 or not (self.n == 1 or in_S(self.n)):
            raise PreconditionViolated(f"n = {self.n} is neither 1 nor in S")
        if self.m <= self.k:
            raise PreconditionViolated(f"m must exceed k = {self.k}")
        if self.j is not None and self.j < 0:
            raise PreconditionViolated("j must be nonnegative")

    @property
    def k(self) -> int:
        return _k_of(self.n)

    def head(self) -> str:
        return tau_word(1 << (self.m - 1))[self.n - 1:]

    def block(self) -> str:
        return word_plus(reflect(tau_word(1 << (self.m - 1))))

    def tail_block(self) -> str:
        return word_plus(reflect(tau_word(1 << self.m)))

    def sequence(self) -> EPSequence:
        """c_{n,j} for finite j, else c_{n,inf}."""
        if self.j is None:
            return EPSequence(self.head(), self.block())
        return EPSequence(self.head() + self.block() * self.j, self.tail_block())


_xi_cache: dict = {}
_xi_lock = threading.Lock()


def xi(n: int, m: int, j: int | None = None):
    """xi_m (j None) or xi_{m,j}; exact, in the field of qhat(m)."""
    key = (n, m, j)
    with _xi_lock:
        if key in _xi_cache:
            return _xi_cache[key]
    ctx = CascadeContext(n, m, j)
    v = evaluate(ctx.sequence(), hat_q(m).value)
    with _xi_lock:
        _xi_cache[key] = v
    return v


def xi_j(n: int, m: int, j: int):
    if j < 1:
        raise PreconditionViolated("j must be positive")
    return xi(n, m, j)


def f_poly(n: int, q):
    """q^n - sum_{i <= n} tau_i q^(n-i)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    coeffs = [1] + [-thue_morse(i) for i in range(1, n + 1)]
    q = nm.as_number(q)
    if isinstance(q, nm.AlgebraicNumber):
        q = q.as_element()
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * q + c
    return acc


# ---------------------------------------------------------------------------
# closed forms


@dataclass
class ClosedForm:
    q: object
    expansion: object  # EPSequence, or the Thue-Morse stream at x = 1
    region: str


def _region_m(n: int, x, m_max: int):
    k = _k_of(n)
    for m in range(k + 1, m_max + 1):
        c = compare(x, xi(n, m + 1))
        if c == Ordering.UNDECIDED:
            raise PrecisionExhausted(f"x is undecided against xi_{m + 1}")
        if c != Ordering.LESS:
            return m
    raise NotInClosedFormRegion(f"x lies below xi_{m_max + 1}, too close to x_n")


def _region_j(n: int, m: int, x) -> int:
    """Least j >= 1 with x < xi_{m,j}; x must lie in [xi_{m+1}, xi_m)."""

    def below(j):
        c = compare(x, xi(n, m, j))
        if c == Ordering.UNDECIDED:
            raise PrecisionExhausted(f"x is undecided against xi_({m},{j})")
        return c == Ordering.LESS

    if below(1):
        return 1
    lo, hi = 1, 2
    while not below(hi):
        lo, hi = hi, hi * 2
        if hi > J_CAP:
            raise NotInClosedFormRegion("x is too close to xi_m")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


def qs_closed_form(x, n: int | None = None, m_max: int = HAT_Q_MAX_N - 1) -> ClosedForm:
    """The smallest univoque base of x from the explicit formulas.

    With n None, x >= 1 is required: the ray x >= q_G gives 1 + 1/x, x = 1 gives
    q_KL, and (1, q_G) is the cascade n = 1.  With n given, x must lie in
    (x_n, xi_{k+1}).
    """
    x = nm.as_number(x)
    if n is None:
        c1 = compare(x, 1)
        if c1 == Ordering.UNDECIDED:
            raise PrecisionExhausted("x is undecided against 1")
        if c1 == Ordering.LESS:
            raise NotInClosedFormRegion("x < 1 needs a cascade index n")
        if c1 == Ordering.EQUAL:
            return ClosedForm(komornik_loreti().value, TAU, "x=1")
        g = golden().value
        cg = compare(x, g)
        if cg == Ordering.UNDECIDED:
            raise PrecisionExhausted("x is undecided against q_G")
        if cg != Ordering.LESS:
            if cg == Ordering.EQUAL:
                return ClosedForm(g, EPSequence("", "1"), "ray")
            q = 1 + 1 / x
            return ClosedForm(q, EPSequence("", "1"), "ray")
        n = 1
    ctx0 = CascadeContext(n, _k_of(n) + 1, None)
    if n != 1:
        lo_c = compare(x, level_point("x_n", n).value)
        if lo_c != Ordering.GREATER:
            raise NotInClosedFormRegion(f"x is not certified above x_{n}")
    top = compare(x, xi(n, ctx0.m))
    if top == Ordering.UNDECIDED:
        raise PrecisionExhausted("x is undecided against the top of the cascade")
    if top != Ordering.LESS:
        raise NotInClosedFormRegion(f"x is not below xi_{ctx0.m}")
    m = _region_m(n, x, m_max)
    j = _region_j(n, m, x)
    seq = CascadeContext(n, m, j).sequence()
    lo, hi = hat_q(m).value, hat_q(m + 1).value
    q = solve_base(seq, x, bracket=(lo, hi), name=f"q_s on cascade n={n} m={m} j={j}")
    return ClosedForm(q, seq, f"cascade(n={n},m={m},j={j})")


def qs_at_least_one(x):
    """q_s(x) for x >= 1 as a QsResult (used by qsolve)."""
    from .qsolve import QsResult, TypeII, TypeIIIBracket, Undetermined

    try:
        cf = qs_closed_form(x)
    except (PrecisionExhausted, NotInClosedFormRegion) as e:
        return QsResult(x, Undetermined(Fraction(1), Fraction(2), str(e)))
    if cf.region == "x=1":
        # x = 1 is the level point x_1: the minimum is q_KL, reached by the
        # non-periodic Thue-Morse expansion, so the bracket is degenerate
        return QsResult(x, TypeIIIBracket(cf.q, cf.q, 0, by_theorem=True))
    return QsResult(x, TypeII(cf.q, cf.expansion, 0, provenance=f"closed form, {cf.region}"))


# ---------------------------------------------------------------------------
# level points of q_KL


@dataclass
class LevelPoint:
    kind: str  # "x_n", "x_n'", "x_n''", "x_n*", "x_n(a)"
    index: dict
    value: object
    in_level: bool  # claimed membership in the level set of ``level``
    level: object = None
    witness: object = None
    notes: list = field(default_factory=list)


_TM_1010011 = "1010011"


def _tail_value(n: int, zeros: int):
    kl = komornik_loreti().value
    word = "0" * zeros
    stream = ShiftedStream(TAU, n - 1)
    if zeros:
        from .words import FunctionStream

        stream = FunctionStream(lambda i: 0 if i <= zeros else thue_morse(n + i - 1 - zeros),
                                f"{word}tau_{n}...")
    return evaluate(stream, kl)


_level_cache: dict = {}


def level_point(kind: str, n: int) -> LevelPoint:
    """x_n, x_n', x_n'' or the accumulation point x_n* (n in S)."""
    key = (kind, n)
    if key in _level_cache:
        return _level_cache[key]
    if n < 1:
        raise PreconditionViolated("n must be positive")
    kl = komornik_loreti()
    s_or_one = n == 1 or in_S(n)
    if kind == "x_n":
        v, claim = _tail_value(n, 0), s_or_one
    elif kind == "x_n'":
        if thue_morse(n) != 1:
            raise PreconditionViolated("x_n' needs tau_n = 1")
        v, claim = _tail_value(n, 1), in_S(n)
    elif kind == "x_n''":
        v = _tail_value(n, 2)
        claim = in_S(n) and "".join(str(thue_morse(i)) for i in range(n, n + 7)) == _TM_1010011
    elif kind == "x_n*":
        if not in_S(n):
            raise PreconditionViolated("x_n* needs n in S")
        k = _k_of(n)
        head = tau_word(1 << k)[n - 1:]
        # head followed by reflect(tau) has the value of head- 1^inf at q_KL,
        # since the reflected Thue-Morse tail sums to 1/(q-1) - 1 there
        v = evaluate(EPSequence(word_minus(head), "1"), kl.value)
        claim = True
    else:
        raise PreconditionViolated(f"unknown level point kind {kind!r}")
    if not isinstance(v, nm.RefinableConstant) or kind == "x_n*":
        tagged = v
    else:
        tagged = nm.RefinableConstant(v._refine, tag=("level", kind, n, claim), name=f"{kind}[{n}]")
    lp = LevelPoint(kind, {"n": n}, tagged, claim, level=kl)
    _level_cache[key] = lp
    return lp


def lemma_witness(n: int, zeros: int = 0) -> EPSequence:
    """An expansion of x_n that is unique in some base below q_KL, for n not in S.

    tau_n tau_{n+1} ... beginning with 11, 011 or 0011 gives (10)^inf, 0(10)^inf or
    00(10)^inf.  Otherwise tau_n .. tau_j (tau_1 .. tau_{2^l}-)^inf with j, l found
    by descending through the dyadic blocks of the Thue-Morse word.
    """
    if in_S(n) or (n == 1 and zeros == 0):
        raise PreconditionViolated("the witness needs n outside S, and x_1 itself lies in the level set")
    t = "0" * zeros + "".join(str(thue_morse(i)) for i in range(n, n + 4))
    for z, pat in ((0, "11"), (1, "011"), (2, "0011")):
        if t.startswith(pat):
            return EPSequence("0" * z, "10")
    j, l = _witness_jl(n)
    head = "0" * zeros + "".join(str(thue_morse(i)) for i in range(n, j + 1))
    return EPSequence(head, word_minus(tau_word(1 << l)))


def _witness_jl(n: int):
    k = (n - 1).bit_length() - 1  # 2^k < n <= 2^(k+1)
    if k < 3:
        raise PreconditionViolated(f"no block witness for n = {n}")
    if n <= (1 << k) + (1 << (k - 1)):
        return (1 << k) + (1 << (k - 1)), k - 2
    m = n - 3 * (1 << (k - 1))
    jp, l = _witness_jl(m)
    return jp + n - m, l


@dataclass
class Witness:
    expansion: EPSequence
    base: object
    certified_at: Fraction  # a rational base below ``base`` where the expansion is unique


def witness_base(n: int, zeros: int = 0, bits: int = 64) -> Witness:
    """Solve the lemma witness for x_n (or x_n', x_n'' via leading zeros) and certify it.

    Uniqueness is certified at a rational base r <= p (exact digit
    comparisons), which implies uniqueness at p since the sets of unique
    expansions grow with the base.
    """
    d = lemma_witness(n, zeros)
    x = level_point({0: "x_n", 1: "x_n'", 2: "x_n''"}[zeros], n).value
    p = solve_base(d, x)
    r = nm.enclose(p, bits).lo
    v = check_unique(d, r)
    if not v.unique:
        raise PreconditionViolated(f"witness not certified unique at {r}: {v}")
    return Witness(d, p, r)


# ---------------------------------------------------------------------------
# de Vries-Komornik level points


FORMS = ("m*2^(k-1)", "m*(2^(2k-1)-1)")


def dvk_level_point(a: str, form: str, k: int) -> LevelPoint:
    """x_n(a) = (alpha_n alpha_{n+1} ...) at the de Vries-Komornik number of a."""
    a = str(a)
    _check_admissible(a)
    if form not in FORMS:
        raise PreconditionViolated(f"form must be one of {FORMS}")
    if k < 1:
        raise PreconditionViolated("k must be positive")
    m = len(a)
    n = m * (1 << (k - 1)) if form == FORMS[0] else m * ((1 << (2 * k - 1)) - 1)
    lm = de_vries_komornik(a)
    qa = lm.value
    if a == "110":
        if form == FORMS[0] and k > 1:
            raise PreconditionViolated("for a = 110 only the second form is covered")
    else:
        lo = compare(qa, komornik_loreti().value)
        hi = compare(qa, tribonacci().value)
        if lo != Ordering.GREATER or hi != Ordering.LESS:
            raise PreconditionViolated("the generated base must lie in (q_KL, Q3)")
    stream = ShiftedStream(_ThetaStream(a), n - 1)
    v = evaluate(stream, qa)
    v = nm.RefinableConstant(v._refine, tag=("level", "x_n(a)", a, n, True), name=f"x_{n}({a})")
    return LevelPoint("x_n(a)", {"a": a, "n": n, "form": form, "k": k}, v, True, level=lm)


def is_exact_xi(n: int, m: int) -> bool:
    return is_exact(xi(n, m))
