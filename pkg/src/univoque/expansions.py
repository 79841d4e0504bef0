"""Expansions in a base q in (1, 2]: evaluation, quasi-greedy digits, uniqueness.

The quasi-greedy digit rule is d_j = 1 iff q * t_{j-1} > 1, with remainders
t_0 = x and t_j = q * t_{j-1} - d_j.  A tie q * t_{j-1} = 1 gives the digit 0
and the remainder 1, after which the stream continues as alpha(q).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import numeric as nm
from .numeric import (
    AlgebraicNumber,
    DomainError,
    DyadicInterval,
    FieldElement,
    NoRootInBracket,
    Ordering,
    PrecisionExhausted,
    QuadraticSurd,
    RefinableConstant,
    compare,
    enclose,
    is_exact,
)
from .words import (
    BinaryWord,
    EPSequence,
    LexResult,
    as_ep,
    lex_compare,
    parse_sequence,
    reflect,
    shift,
)

DEFAULT_STREAM_DEPTH = 1024
DEFAULT_MEMBERSHIP_DEPTH = 512
GUARD_ALLOWANCE = nm.GUARD_ALLOWANCE


# ---------------------------------------------------------------------------
# polynomials of an eventually periodic expansion


def ep_polys(digits) -> tuple[list[int], list[int]]:
    """Integer polynomials N, D (highest degree first) with (digits)_q = N(q)/D(q)."""
    if isinstance(digits, BinaryWord):
        a = [int(c) for c in digits.bits] or [0]
        L = len(digits.bits)
        return a if L else [0], [1] + [0] * L
    pre, per = digits.pre, digits.period
    L, p = len(pre), len(per)
    A = [int(c) for c in pre]
    B = [int(c) for c in per]
    # (q^p - 1) * A(q) + B(q)
    N = [0] * (L + p)
    for i, c in enumerate(A):
        N[i] += c
        N[i + p] -= c
    for i, c in enumerate(B):
        N[L + i] += c
    D = [1] + [0] * (p - 1) + [-1] + [0] * L
    return N, D


def _coeffs_low_first(hl):
    return tuple(Fraction(c) for c in reversed(hl))


# ---------------------------------------------------------------------------
# interval evaluation


def _lambda_points(Q: DyadicInterval, W: int):
    if Q.a <= 0 or Q.lo <= 1:
        raise DomainError("base must exceed 1")
    one = 1 << (Q.prec + W)
    lam_lo = one // Q.b
    lam_hi = -((-one) // Q.a)
    return lam_lo, lam_hi


def _horner_lambda(bits: str, lam: int, W: int, up: bool) -> int:
    """sum_i b_i lam^i in fixed point, rounded down or up."""
    acc = 0
    one = 1 << W
    for c in reversed(bits):
        acc += one if c == "1" else 0
        prod = acc * lam
        acc = -((-prod) >> W) if up else prod >> W
    return acc


def _pow_fixed(lam: int, n: int, W: int, up: bool) -> int:
    result = 1 << W
    base = lam
    while n:
        if n & 1:
            prod = result * base
            result = -((-prod) >> W) if up else prod >> W
        n >>= 1
        if n:
            prod = base * base
            base = -((-prod) >> W) if up else prod >> W
    return result


def _ep_value_fixed(seq: EPSequence, lam: int, W: int, up: bool) -> int:
    pre = _horner_lambda(seq.pre, lam, W, up) if seq.pre else 0
    per = _horner_lambda(seq.period, lam, W, up)
    lamL = _pow_fixed(lam, len(seq.pre), W, up)
    lamp = _pow_fixed(lam, len(seq.period), W, not up)
    den = (1 << W) - lamp
    if den <= 0:
        raise DomainError("base too close to 1 for this precision")
    num = lamL * per
    if up:
        tail = -((-num) // den)
    else:
        tail = num // den
    return pre + tail


def _stream_terms(q_lo: Fraction, bits: int) -> int:
    # q^-n/(q-1) <= 2^-(bits+2)
    lg = math.log2(float(q_lo))
    extra = -math.log2(float(q_lo - 1)) if q_lo < 2 else 0.0
    return max(8, int(math.ceil((bits + 3 + max(extra, 0)) / lg)) + 1)


def eval_interval(digits, Q: DyadicInterval, work: int) -> DyadicInterval:
    """Enclosure of (digits)_q for q in Q, at working precision ``work``.

    The value is decreasing in q, so the bounds come from the endpoints.
    """
    W = work + 8
    lam_lo, lam_hi = _lambda_points(Q, W)
    if isinstance(digits, BinaryWord):
        lo = _horner_lambda(digits.bits, lam_lo, W, False)
        hi = _horner_lambda(digits.bits, lam_hi, W, True)
        return DyadicInterval(lo, hi, W)
    ep = as_ep(digits)
    if ep is not None:
        lo = _ep_value_fixed(ep, lam_lo, W, False)
        hi = _ep_value_fixed(ep, lam_hi, W, True)
        return DyadicInterval(lo, hi, W)
    n = _stream_terms(Q.lo, work)
    word = digits.prefix(n)
    lo = _horner_lambda(word, lam_lo, W, False)
    hi = _horner_lambda(word, lam_hi, W, True)
    # sum_{i>n} lam^i = lam^(n+1)/(1-lam), at the largest lam
    lamn = _pow_fixed(lam_hi, n + 1, W, True)
    hi += -((-(lamn << W)) // ((1 << W) - lam_hi))
    return DyadicInterval(lo, hi, W)


# ---------------------------------------------------------------------------
# evaluation


def _poly_at(coeffs_hl, q):
    acc = Fraction(0)
    for c in coeffs_hl:
        acc = acc * q + c
    return acc


def evaluate(digits, q):
    """(digits)_q = sum d_i q^-i.

    Exact-tier q gives an exact result for words and eventually periodic
    sequences: a Fraction, a QuadraticSurd, or a FieldElement in Q(q).
    Otherwise the result is a RefinableConstant tagged ``("eval", digits, q)``.
    """
    q = nm.as_number(q)
    if isinstance(digits, str):
        digits = parse_sequence(digits)
    ep = digits if isinstance(digits, (BinaryWord, EPSequence)) else as_ep(digits)
    if ep is not None and is_exact(q):
        if isinstance(q, FieldElement) and q.rational_value() is not None:
            q = q.rational_value()
        N, D = ep_polys(ep)
        if isinstance(q, Fraction):
            if q <= 1:
                raise DomainError("base must exceed 1")
            return _poly_at(N, q) / _poly_at(D, q)
        if isinstance(q, QuadraticSurd):
            return _poly_at(N, q) / _poly_at(D, q)
        if isinstance(q, AlgebraicNumber):
            return FieldElement(q, _coeffs_low_first(N), _coeffs_low_first(D))
        if isinstance(q, FieldElement):
            return _poly_at(N, q) / _poly_at(D, q)
    src = ep if ep is not None else digits

    def refine(bits: int) -> DyadicInterval:
        extra = 8
        while True:
            Q = enclose(q, bits + extra)
            iv = eval_interval(src, Q, bits + extra)
            if iv.width_ok(bits):
                return iv
            extra *= 2
            if extra > 8 * (bits + 64):
                raise PrecisionExhausted("evaluation did not reach the requested width")

    return RefinableConstant(refine, tag=("eval", src, q), name=f"({src})_q")


# ---------------------------------------------------------------------------
# solving base equations


def _poly_for_target(digits, x):
    """Integer polynomial vanishing at the root of (digits)_q = x, or None."""
    N, D = ep_polys(digits)
    if isinstance(x, Fraction):
        u, v = x.numerator, x.denominator
        return nm.int_poly(nm.poly_add(nm.poly_scale(N, v), nm.poly_scale(D, -u))), False
    if isinstance(x, QuadraticSurd):
        # (N - A D)^2 - d B^2 D^2
        A, B, d = x.a, x.b, x.d
        P1 = [Fraction(n) - A * Fraction(c) for n, c in zip([0] * (len(D) - len(N)) + N, D)]
        P1sq = nm.poly_mul(P1, P1)
        D2 = nm.poly_mul(D, D)
        P = nm.poly_add(P1sq, nm.poly_scale(D2, -d * B * B))
        return nm.int_poly(P), True
    return None, False


def _is_transcendental(c) -> bool:
    tag = getattr(c, "tag", None)
    return bool(tag) and tag[0] == "landmark" and tag[1] in ("qKL", "dvk")


def _same_rational_function(d1, d2) -> bool:
    N1, D1 = ep_polys(d1)
    N2, D2 = ep_polys(d2)
    diff = nm.poly_add(nm.poly_mul(N1, D2), nm.poly_scale(nm.poly_mul(N2, D1), -1))
    return not any(diff)


def solve_base(digits, x, bracket=(Fraction(1), Fraction(2)), *, name: str | None = None):
    """The unique q in (lo, hi] with (digits)_q = x.

    Rational and quadratic-surd targets give an AlgebraicNumber (or a Fraction
    when the root is a dyadic rational); other targets give a RefinableConstant.
    """
    if isinstance(digits, str):
        digits = EPSequence.parse(digits)
    if isinstance(digits, BinaryWord):
        digits = digits.as_sequence()
    if digits.is_zero_tail and "1" not in digits.pre:
        raise DomainError("the zero sequence has no base")
    x = nm.as_number(x)
    lo, hi = (nm.as_number(b) for b in bracket)

    # symbolic identities: x was built as (digits)_c
    tag = getattr(x, "tag", None)
    if tag and tag[0] == "eval" and tag[1] == digits:
        return tag[2]
    if tag and tag[0] == "eval" and isinstance(tag[1], EPSequence) and _is_transcendental(tag[2]) \
            and _same_rational_function(digits, tag[1]):
        # equal as rational functions of a transcendental base, so equal values there
        return tag[2]
    if isinstance(x, FieldElement) and x.rational_value() is None:
        g = x.gen
        gi = g.enclose(64)
        if _inside(gi, lo, hi) and nm.exact_equal(evaluate(digits, g), x):
            return g

    # endpoint checks
    val_hi = evaluate(digits, hi)
    c_hi = compare(val_hi, x)
    if c_hi == Ordering.EQUAL:
        return hi
    if c_hi == Ordering.GREATER:
        raise NoRootInBracket(f"({digits})_q exceeds x at the upper end of the bracket")
    if not (isinstance(lo, Fraction) and lo <= 1):
        c_lo = compare(evaluate(digits, lo), x)
        if c_lo in (Ordering.EQUAL, Ordering.LESS):
            raise NoRootInBracket(f"({digits})_q does not exceed x at the lower end of the bracket")

    def G(point: DyadicInterval, work: int) -> DyadicInterval:
        return eval_interval(digits, point, work) - enclose(x, work + 8)

    l0, h0 = _start_points(G, lo, hi)
    if h0.a == l0.a:  # exact dyadic root
        return Fraction(l0.a, 1 << l0.prec)
    state = {"bracket": (l0, h0)}
    lock = threading.Lock()

    def refine(bits: int) -> DyadicInterval:
        with lock:
            a, b = state["bracket"]
            cur = DyadicInterval(a.a, b.with_prec(a.prec).a, a.prec) if a.prec >= b.prec else \
                DyadicInterval(a.with_prec(b.prec).a, b.a, b.prec)
            if cur.width_ok(bits):
                return cur
            r = nm.monotone_root(G, DyadicInterval(cur.a, cur.a, cur.prec),
                                 DyadicInterval(cur.b, cur.b, cur.prec), bits,
                                 cap=nm.precision_cap() + GUARD_ALLOWANCE)
            state["bracket"] = (DyadicInterval(r.a, r.a, r.prec), DyadicInterval(r.b, r.b, r.prec))
            return r

    if isinstance(x, (Fraction, QuadraticSurd)):
        P, needs_count = _poly_for_target(digits, x)
        bits = 32
        while True:
            r = refine(bits)
            if r.a == r.b:
                return r.lo
            if not needs_count or nm.count_roots(P, r.lo, r.hi) == 1:
                alg = AlgebraicNumber(P, r.lo, r.hi, check=False, name=name)
                return alg
            bits *= 2
    return RefinableConstant(refine, tag=("root", digits, x), name=name or f"root of ({digits})_q = x")


def _inside(iv: DyadicInterval, lo, hi) -> bool:
    try:
        return enclose(lo, 64).hi < iv.lo and iv.hi <= enclose(hi, 64).lo
    except PrecisionExhausted:
        return False


def _start_points(G, lo, hi):
    """Dyadic points l0 < h0 around the root with G(l0) > 0 > G(h0) certified."""
    cap = nm.precision_cap() + GUARD_ALLOWANCE
    bits = 48
    while True:
        h_enc = enclose(hi, bits)
        h0 = DyadicInterval(h_enc.b, h_enc.b, h_enc.prec)
        s, _ = nm._probe_sign(G, h0.a, h0.prec, bits, cap)
        if s == 0:
            return h0, h0
        if s == -1:
            break
        if s == 1:
            raise NoRootInBracket("no root at or below the upper end of the bracket")
        bits *= 2
        if bits > cap:
            raise PrecisionExhausted("could not certify the upper end of the bracket")
    if isinstance(lo, Fraction) and lo <= 1:
        k = 1
        while True:
            l0 = DyadicInterval.around(1 + Fraction(1, 1 << k), max(k + 2, bits))
            s, _ = nm._probe_sign(G, l0.a, l0.prec, bits, cap)
            if s == 1:
                return l0, h0.with_prec(l0.prec) if l0.prec > h0.prec else h0
            if s == 0:
                return l0, l0
            k += 1
            if k > cap:
                raise NoRootInBracket("no root above 1")
    bits = 48
    while True:
        l_enc = enclose(lo, bits)
        l0 = DyadicInterval(l_enc.a, l_enc.a, l_enc.prec)
        s, _ = nm._probe_sign(G, l0.a, l0.prec, bits, cap)
        if s == 1:
            return l0, h0
        if s == 0:
            raise NoRootInBracket("root at the open lower end of the bracket")
        if s == -1 and bits >= 128:
            raise NoRootInBracket("no root above the lower end of the bracket")
        bits *= 2


# ---------------------------------------------------------------------------
# exact tie tests


def _point_form(q):
    """q as a Fraction or an AlgebraicNumber, if it is exact."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, QuadraticSurd):
        return q.to_algebraic()
    if isinstance(q, AlgebraicNumber):
        return q
    if isinstance(q, FieldElement):
        r = q.rational_value()
        return r if r is not None else q.to_algebraic()
    return None


def exact_tie_sign(R, q, s: int, word: str):
    """Exact sign of R*q^s - (word)(q) - 1 where (word)(q) = sum w_i q^(s-i).

    Returns None when the tiers involved do not allow an exact decision.
    """
    S = [0] * (s + 1)
    for i, c in enumerate(word, start=1):
        if c == "1":
            S[i] = 1
    S[s] += 1  # the trailing "- 1"
    # S as a polynomial of degree s, highest first: S[i] multiplies q^(s-i)
    if isinstance(R, (FieldElement, AlgebraicNumber)):
        gen = R.gen if isinstance(R, FieldElement) else R
        if q is gen or (isinstance(q, FieldElement) and q.gen is gen):
            val = R * q ** s
            for i, c in enumerate(S):
                if c:
                    val = val - c * q ** (s - i)
            if isinstance(val, FieldElement):
                return val.sign()
            return nm.sign(val)
        return None
    point = _point_form(q)
    if point is None:
        return None
    if isinstance(R, Fraction):
        poly = [R] + [Fraction(0)] * s
        poly = [p - c for p, c in zip(poly, S)]
        return nm.sign_of_poly_at(poly, point)
    if isinstance(R, QuadraticSurd):
        A, B, d = R.a, R.b, R.d
        P1 = [A] + [Fraction(0)] * s
        P1 = [p - c for p, c in zip(P1, S)]
        s1 = nm.sign_of_poly_at(P1, point)
        s2 = (B > 0) - (B < 0)
        if s1 == 0:
            return s2
        if s1 == s2 or s2 == 0:
            return s1
        P2 = [B] + [Fraction(0)] * s
        diff = nm.poly_add(nm.poly_mul(P1, P1), nm.poly_scale(nm.poly_mul(P2, P2), -d))
        sd = nm.sign_of_poly_at(diff, point)
        if sd == 0:
            return 0
        return s1 if sd > 0 else s2
    return None


# ---------------------------------------------------------------------------
# quasi-greedy streams


class QuasiGreedyStream:
    """Certified digits of the quasi-greedy expansion of x in base q.

    Digits are memoized.  Each digit is committed only after a certified
    strict comparison or an exact tie decision.  Access is synchronized, so a
    stream may be shared between threads.
    """

    START_BITS = 128

    def __init__(self, x, q, *, is_alpha: bool = False):
        self.x = nm.as_number(x)
        self.q = nm.as_number(q)
        self.is_alpha = is_alpha
        self._digits = []
        self._lock = threading.RLock()
        self._ckpt = (0, self.x)  # (index, exact remainder)
        self._prec = self.START_BITS
        self._T = None
        self._ep = None
        self._tie_at = None
        self._detect_tried = 0
        self._tested = None

    # DigitStream protocol
    def digit(self, i: int) -> int:
        if i < 1:
            raise IndexError("digits are indexed from 1")
        with self._lock:
            self._extend(i)
            return self._digit_at(i)

    def prefix(self, n: int) -> str:
        with self._lock:
            self._extend(n)
            if self._ep is not None:
                return self._ep.prefix(n)
            return "".join(map(str, self._digits[:n]))

    def as_ep(self):
        with self._lock:
            if self._ep is None and self._tie_at is not None and not self.is_alpha:
                tail = alpha(self.q).as_ep()
                if tail is not None:
                    head = "".join(map(str, self._digits[: self._tie_at]))
                    self._ep = tail.prepend(head)
            return self._ep

    def __repr__(self):
        return f"QuasiGreedyStream(x={self.x!r}, q={self.q!r})"

    def _digit_at(self, i):
        if self._ep is not None:
            return self._ep.digit(i)
        return self._digits[i - 1]

    def set_period(self, ep: EPSequence) -> None:
        """Adopt a certified eventually periodic form of the whole stream."""
        with self._lock:
            self._ep = ep

    # core recurrence
    def _restart(self, prec: int):
        c, R = self._ckpt
        Q = enclose(self.q, prec).with_prec(prec)
        T = enclose(R, prec).with_prec(prec)
        for d in self._digits[c:]:
            T = Q * T - d
        self._prec = prec
        self._Q = Q
        self._T = T

    def _extend(self, n: int):
        if self._ep is not None or len(self._digits) >= n:
            return
        limit = max(nm.precision_cap(), 64) + GUARD_ALLOWANCE
        if self._T is None:
            if self.q.__class__ is Fraction and not (1 < self.q <= 2):
                raise DomainError("base must lie in (1, 2]")
            self._check_domain()
            self._restart(self._prec)
        while len(self._digits) < n:
            j = len(self._digits) + 1
            qT = self._Q * self._T
            if qT.lo > 1:
                self._digits.append(1)
                self._T = qT - 1
                continue
            if qT.hi < 1:
                self._digits.append(0)
                self._T = qT
                continue
            # undecided at this precision
            exact = is_exact(self.x) and is_exact(self.q)
            if exact and self._prec >= self._ample(j) and self._tested != j:
                self._tested = j
                c, R = self._ckpt
                word = "".join(map(str, self._digits[c:]))
                sgn = exact_tie_sign(R, self.q, j - c, word)
                if sgn == 0:
                    self._digits.append(0)
                    self._ckpt = (j, Fraction(1))
                    if self._tie_at is None:
                        self._tie_at = j
                    if self.is_alpha:
                        self._ep = EPSequence("", "".join(map(str, self._digits)))
                        return
                    self._restart(self._prec)
                    continue
                if sgn is not None:
                    self._digits.append(1 if sgn > 0 else 0)
                    self._restart(self._prec)
                    continue
            new_prec = max(2 * self._prec, int(j * 1.1) + 64)
            if not exact and new_prec > limit:
                if self._prec >= limit:
                    raise PrecisionExhausted(
                        f"digit {j} of the expansion is undecided at the precision cap")
                new_prec = limit
            if new_prec > nm._HARD_CEILING:
                raise PrecisionExhausted(f"digit {j} is undecided at the hard ceiling")
            self._restart(new_prec)

    def _ample(self, j: int) -> int:
        # precision at which an undecided digit is probably an exact tie
        steps = j - self._ckpt[0]
        return int(2 * steps * math.log2(max(float(enclose(self.q, 32)), 1.01))) + 2 * self.START_BITS

    def _check_domain(self):
        qi, xi = enclose(self.q, 64), enclose(self.x, 64)
        if qi.hi <= 1 or qi.lo > 2:
            raise DomainError("base must lie in (1, 2]")
        if xi.hi < 0:
            raise DomainError("x must be nonnegative")
        # x <= 1/(q-1)  <=>  x*(q-1) <= 1
        prod = xi * (qi - 1)
        if prod.lo > 1:
            raise DomainError("x exceeds 1/(q-1), the largest value with an expansion")

    def detect_period(self, search: int = 256, max_candidates: int = 8):
        """Try to certify an eventually periodic form of alpha(q) (exact q only).

        Candidates come from the emitted prefix and are accepted only when
        they are quasi-greedy (every shift <= the sequence) and evaluate to 1
        exactly at q.
        """
        if not self.is_alpha or not is_exact(self.q):
            return self.as_ep()
        with self._lock:
            if self._ep is not None:
                return self._ep
            if self._detect_tried >= search:
                return None
        w = self.prefix(search)
        with self._lock:
            if self._ep is not None:
                return self._ep
            self._detect_tried = search
        n = len(w)
        cands = []
        for p in range(1, n // 3 + 1):
            L = 0
            for i in range(n - p - 1, -1, -1):
                if w[i] != w[i + p]:
                    L = i + 1
                    break
            if n - L >= max(3 * p, 24):
                cands.append((L + p, L, p))
        cands.sort()
        seen = set()
        tried = 0
        for _, L, p in cands:
            cand = EPSequence(w[:L], w[L:L + p])
            if cand in seen or cand.period == "0":
                continue
            seen.add(cand)
            tried += 1
            if tried > max_candidates:
                break
            if not _is_quasi_greedy_form(cand):
                continue
            try:
                if nm.exact_equal(evaluate(cand, self.q), Fraction(1)):
                    self.set_period(cand)
                    return cand
            except PrecisionExhausted:
                continue
        return None


def _is_quasi_greedy_form(seq: EPSequence) -> bool:
    for n in range(1, len(seq.pre) + len(seq.period)):
        if lex_compare(seq.shift(n), seq).greater:
            return False
    return True


_alpha_cache: dict = {}
_alpha_lock = threading.Lock()


def alpha(q) -> QuasiGreedyStream:
    """The quasi-greedy expansion of 1 in base q (memoized per base)."""
    q = nm.as_number(q)
    with _alpha_lock:
        if isinstance(q, (Fraction, QuadraticSurd)):
            s = _alpha_cache.get(q)
            if s is None:
                s = QuasiGreedyStream(Fraction(1), q, is_alpha=True)
                if len(_alpha_cache) > 4096:
                    _alpha_cache.clear()
                _alpha_cache[q] = s
            return s
        s = getattr(q, "_alpha_stream", None)
        if s is None:
            s = QuasiGreedyStream(Fraction(1), q, is_alpha=True)
            try:
                q._alpha_stream = s
            except AttributeError:
                pass
        return s


def quasi_greedy_digits(x, q, n: int) -> BinaryWord:
    """First n digits of the quasi-greedy expansion of x in base q."""
    x = nm.as_number(x)
    q = nm.as_number(q)
    if isinstance(x, Fraction) and x == 1:
        return BinaryWord(alpha(q).prefix(n))
    return BinaryWord(QuasiGreedyStream(x, q).prefix(n))


def expansion_stream(x, q) -> QuasiGreedyStream:
    x = nm.as_number(x)
    if isinstance(x, Fraction) and x == 1:
        return alpha(q)
    return QuasiGreedyStream(x, q)


# ---------------------------------------------------------------------------
# uniqueness


@dataclass(frozen=True)
class UniqueVerdict:
    kind: str  # "unique", "unique_to_depth", "violation"
    index: int | None = None
    side: str | None = None  # "0" (tail not below alpha) or "1" (tail not above reflect(alpha))
    depth: int | None = None

    @property
    def unique(self) -> bool:
        return self.kind == "unique"

    @property
    def violated(self) -> bool:
        return self.kind == "violation"

    def __str__(self):
        if self.kind == "unique":
            return "Unique (exact)"
        if self.kind == "unique_to_depth":
            return f"UniqueToDepth({self.depth})"
        return f"Violation(index={self.index}, side={self.side})"


def check_unique(digits, q, depth: int = DEFAULT_STREAM_DEPTH,
                 compare_depth: int | None = None) -> UniqueVerdict:
    """Test the digit conditions characterizing unique expansions in base q.

    After a 0 the tail must be strictly below alpha(q); after a 1 it must be
    strictly above reflect(alpha(q)).  For eventually periodic digits every
    tail is one of finitely many, so a verdict with all comparisons decided
    is exact.
    """
    q = nm.as_number(q)
    if isinstance(digits, str):
        digits = EPSequence.parse(digits)
    a = alpha(q)
    if is_exact(q):
        a.detect_period(search=min(256, max(64, depth)))
    ra = reflect(a)
    cdepth = compare_depth or max(depth, 256)
    ep = as_ep(digits)
    if ep is not None:
        positions = range(1, len(ep.pre) + len(ep.period) + 1)
    else:
        positions = range(1, depth + 1)
    all_decided = True
    for n in positions:
        d = ep.digit(n) if ep is not None else digits.digit(n)
        tail = ep.shift(n) if ep is not None else shift(digits, n)
        if d == 0:
            r = lex_compare(tail, a, cdepth)
            if r.greater or r.equal:
                return UniqueVerdict("violation", n, "0")
        else:
            r = lex_compare(tail, ra, cdepth)
            if r.less or r.equal:
                return UniqueVerdict("violation", n, "1")
        if r.kind == "equal_to_depth":
            all_decided = False
    if ep is not None and all_decided:
        return UniqueVerdict("unique")
    return UniqueVerdict("unique_to_depth", depth=depth if ep is None else cdepth)


# ---------------------------------------------------------------------------
# membership in the univoque set, its closure, and V


@dataclass(frozen=True)
class MembershipVerdict:
    kind: str  # "certified_false", "no_violation_to_depth", "exact_true"
    index: int | None = None
    reason: str = ""

    @property
    def exact_true(self) -> bool:
        return self.kind == "exact_true"

    @property
    def certified_false(self) -> bool:
        return self.kind == "certified_false"

    def __str__(self):
        if self.kind == "certified_false":
            return f"Certified(false, witness n={self.index}: {self.reason})"
        if self.kind == "exact_true":
            return "ExactTrue"
        return f"NoViolationToDepth({self.index})"


SETS = ("U", "U_closure", "V")


def membership(q, which: str = "U", depth: int = DEFAULT_MEMBERSHIP_DEPTH) -> MembershipVerdict:
    """Check the shift conditions on alpha(q) defining U, its closure, or V.

    U:         reflect(a) < sigma^n(a) < a   for n >= 1
    U_closure: reflect(a) < sigma^n(a) <= a  for n >= 1
    V:         reflect(a) <= sigma^n(a) <= a for n >= 0
    """
    if which not in SETS:
        raise ValueError(f"which must be one of {SETS}")
    q = nm.as_number(q)
    a = alpha(q)
    ep = a.detect_period(search=min(max(depth, 64), 256)) if is_exact(q) else a.as_ep()
    ra = reflect(a)
    if ep is not None:
        positions = range(0 if which == "V" else 1, len(ep.pre) + len(ep.period) + 1)
        ep_r = ep.reflect()
        for n in positions:
            t = ep.shift(n)
            lo = lex_compare(t, ep_r)
            if lo.less or (lo.equal and which != "V"):
                return MembershipVerdict("certified_false", n, "shift not above the reflection")
            up = lex_compare(t, ep)
            if up.greater or (up.equal and which == "U" and n >= 1):
                return MembershipVerdict("certified_false", n, "shift not below alpha")
        return MembershipVerdict("exact_true")
    start = 0 if which == "V" else 1
    cdepth = max(4 * depth, 256)
    for n in range(start, depth + 1):
        t = shift(a, n)
        lo = lex_compare(t, ra, cdepth)
        if lo.less:
            return MembershipVerdict("certified_false", n, "shift below the reflection")
        up = lex_compare(t, a, cdepth) if n >= 1 else LexResult("equal")
        if up.greater:
            return MembershipVerdict("certified_false", n, "shift above alpha")
    return MembershipVerdict("no_violation_to_depth", depth)
