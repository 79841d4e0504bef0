"""Binary words, eventually periodic sequences and the Thue-Morse sequence.

Digits are indexed from 1, as in the usual notation d_1 d_2 d_3 ...
Sequences render as ``pre(period)^inf``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol, Union, runtime_checkable


class LastDigitMismatch(ValueError):
    """word_plus on a word ending in 1, or word_minus on one ending in 0."""


class SequenceSyntaxError(ValueError):
    pass


def _check_bits(bits: str) -> None:
    if bits.strip("01"):
        raise ValueError(f"not a binary word: {bits!r}")


_FLIP = str.maketrans("01", "10")


@dataclass(frozen=True)
class BinaryWord:
    bits: str = ""

    def __post_init__(self):
        _check_bits(self.bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return self.bits

    def __add__(self, other):
        if isinstance(other, BinaryWord):
            return BinaryWord(self.bits + other.bits)
        if isinstance(other, str):
            return BinaryWord(self.bits + other)
        return NotImplemented

    def __mul__(self, n: int):
        return BinaryWord(self.bits * n)

    def digit(self, i: int) -> int:
        return int(self.bits[i - 1])

    def prefix(self, n: int) -> str:
        return self.bits[:n]

    def reflect(self) -> "BinaryWord":
        return BinaryWord(self.bits.translate(_FLIP))

    def plus(self) -> "BinaryWord":
        return word_plus(self)

    def minus(self) -> "BinaryWord":
        return word_minus(self)

    def as_sequence(self) -> "EPSequence":
        """The word followed by 0^inf."""
        return EPSequence(self.bits, "0")


def _minimal_period(w: str) -> str:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


@dataclass(frozen=True)
class EPSequence:
    """The eventually periodic sequence pre + period + period + ...

    Construction normalizes to the canonical form: the period is primitive
    and the preperiod is as short as possible.
    """

    pre: str
    period: str

    def __post_init__(self):
        pre, per = str(self.pre), str(self.period)
        _check_bits(pre)
        _check_bits(per)
        if not per:
            raise ValueError("period must be nonempty")
        per = _minimal_period(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, period: str) -> "EPSequence":
        return cls("", period)

    @classmethod
    def parse(cls, text: str) -> "EPSequence":
        seq = parse_sequence(text)
        if isinstance(seq, BinaryWord):
            raise SequenceSyntaxError(f"{text!r} has no periodic part")
        return seq

    def __str__(self):
        return f"{self.pre}({self.period})^inf"

    def digit(self, i: int) -> int:
        if i <= len(self.pre):
            return int(self.pre[i - 1])
        return int(self.period[(i - len(self.pre) - 1) % len(self.period)])

    def prefix(self, n: int) -> str:
        if n <= len(self.pre):
            return self.pre[:n]
        rest = n - len(self.pre)
        reps = -(-rest // len(self.period))
        return self.pre + (self.period * reps)[:rest]

    def shift(self, n: int) -> "EPSequence":
        """The tail d_{n+1} d_{n+2} ..."""
        if n <= len(self.pre):
            return EPSequence(self.pre[n:], self.period)
        k = (n - len(self.pre)) % len(self.period)
        return EPSequence("", self.period[k:] + self.period[:k])

    def reflect(self) -> "EPSequence":
        return EPSequence(self.pre.translate(_FLIP), self.period.translate(_FLIP))

    def prepend(self, word: str) -> "EPSequence":
        return EPSequence(word + self.pre, self.period)

    def as_ep(self) -> "EPSequence":
        return self

    @property
    def is_zero_tail(self) -> bool:
        return self.period == "0"

    @property
    def is_periodic(self) -> bool:
        return not self.pre

    def tails(self):
        """Distinct tails sigma^n(self), n >= 0, as (first index, tail)."""
        out = []
        for n in range(len(self.pre) + len(self.period)):
            out.append((n, self.shift(n)))
        return out


@runtime_checkable
class DigitStream(Protocol):
    """A lazily produced infinite digit sequence indexed from 1."""

    def digit(self, i: int) -> int: ...

    def prefix(self, n: int) -> str: ...


Sequence = Union[EPSequence, DigitStream]


class FunctionStream:
    """Stream given by a digit function, with an optional label for display."""

    def __init__(self, fn, label: str = "stream"):
        self._fn = fn
        self.label = label

    def digit(self, i: int) -> int:
        return self._fn(i)

    def prefix(self, n: int) -> str:
        return "".join(str(self._fn(i)) for i in range(1, n + 1))

    def as_ep(self):
        return None

    def __repr__(self):
        return f"FunctionStream({self.label})"


class ShiftedStream:
    """sigma^n applied to a stream."""

    def __init__(self, base, n: int):
        self.base = base
        self.n = n

    def digit(self, i: int) -> int:
        return self.base.digit(i + self.n)

    def prefix(self, k: int) -> str:
        return self.base.prefix(self.n + k)[self.n:]

    def as_ep(self):
        ep = as_ep(self.base)
        return ep.shift(self.n) if ep is not None else None


class ReflectedStream:
    def __init__(self, base):
        self.base = base

    def digit(self, i: int) -> int:
        return 1 - self.base.digit(i)

    def prefix(self, k: int) -> str:
        return self.base.prefix(k).translate(_FLIP)

    def as_ep(self):
        ep = as_ep(self.base)
        return ep.reflect() if ep is not None else None


def as_ep(s):
    """The EPSequence form of a sequence if one is known, else None."""
    if isinstance(s, EPSequence):
        return s
    fn = getattr(s, "as_ep", None)
    return fn() if fn is not None else None


def shift(s, n: int):
    if isinstance(s, EPSequence):
        return s.shift(n)
    return ShiftedStream(s, n)


# ---------------------------------------------------------------------------
# parsing

_ATOM = re.compile(r"\(([01]+)\)|([01])")
_POW = re.compile(r"\^(inf|∞|\d+)")


def parse_sequence(text: str):
    """Parse a word or an eventually periodic sequence.

    Grammar: atoms are single bits or parenthesized words, each optionally
    raised to a power ``^k``; the last atom may be raised to ``^inf``.
    ``01^inf`` is 0 followed by 1^inf.  Without ``^inf`` the result is a
    BinaryWord.
    """
    s = text.strip().replace(" ", "").replace("_", "")
    pos = 0
    out = []
    while pos < len(s):
        m = _ATOM.match(s, pos)
        if not m:
            raise SequenceSyntaxError(f"cannot parse {text!r} at position {pos}")
        word = m.group(1) or m.group(2)
        pos = m.end()
        p = _POW.match(s, pos)
        if p:
            pos = p.end()
            exp = p.group(1)
            if exp in ("inf", "∞"):
                if pos != len(s):
                    raise SequenceSyntaxError("^inf must end the sequence")
                return EPSequence("".join(out), word)
            out.append(word * int(exp))
        else:
            out.append(word)
    if not out:
        raise SequenceSyntaxError("empty sequence")
    return BinaryWord("".join(out))


# ---------------------------------------------------------------------------
# word operations


def reflect(w):
    """Flip every bit of a word, sequence or stream."""
    if isinstance(w, str):
        return w.translate(_FLIP)
    if isinstance(w, (BinaryWord, EPSequence)):
        return w.reflect()
    return ReflectedStream(w)


def _bits(w) -> str:
    return w.bits if isinstance(w, BinaryWord) else str(w)


def word_plus(w):
    b = _bits(w)
    if not b or b[-1] != "0":
        raise LastDigitMismatch(f"word_plus needs a last digit 0: {b!r}")
    r = b[:-1] + "1"
    return BinaryWord(r) if isinstance(w, BinaryWord) else r


def word_minus(w):
    b = _bits(w)
    if not b or b[-1] != "1":
        raise LastDigitMismatch(f"word_minus needs a last digit 1: {b!r}")
    r = b[:-1] + "0"
    return BinaryWord(r) if isinstance(w, BinaryWord) else r


# ---------------------------------------------------------------------------
# Thue-Morse


def thue_morse(i: int) -> int:
    """tau_i: parity of the number of ones in the binary expansion of i."""
    return bin(i).count("1") & 1


@lru_cache(maxsize=64)
def tau_word(n: int) -> str:
    """tau_1 ... tau_n."""
    return "".join(str(thue_morse(i)) for i in range(1, n + 1))


class _ThueMorseStream:
    def digit(self, i: int) -> int:
        return thue_morse(i)

    def prefix(self, n: int) -> str:
        return tau_word(n) if n <= 1 << 16 else "".join(str(thue_morse(i)) for i in range(1, n + 1))

    def as_ep(self):
        return None

    def __repr__(self):
        return "tau"


TAU = _ThueMorseStream()


def tau_block_minus(n: int) -> str:
    """tau_1 ... tau_{2^n} with the last digit lowered; alpha of the n-th base below q_KL."""
    return word_minus(tau_word(1 << n))


# ---------------------------------------------------------------------------
# lexicographic order


@dataclass(frozen=True)
class LexResult:
    kind: str  # "less", "greater", "equal", "equal_to_depth"
    index: int | None = None

    @property
    def less(self):
        return self.kind == "less"

    @property
    def greater(self):
        return self.kind == "greater"

    @property
    def equal(self):
        return self.kind == "equal"

    def __str__(self):
        if self.kind in ("less", "greater"):
            return f"{self.kind.capitalize()}(at {self.index})"
        if self.kind == "equal_to_depth":
            return f"EqualToDepth({self.index})"
        return "Equal"


def _first_diff(a: str, b: str):
    n = min(len(a), len(b))
    if a[:n] == b[:n]:
        return None
    lo, hi = 0, n
    # binary search on equal prefix length
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid
    return lo  # 0-based position of the first difference


DEFAULT_DEPTH_CAP = 10_000


def lex_compare(s, t, depth_cap: int = DEFAULT_DEPTH_CAP, start: int = 1) -> LexResult:
    """Compare two sequences lexicographically from digit ``start`` on.

    Exact when both sides have a known eventually periodic form; otherwise
    compares up to ``depth_cap`` digits.  Indices in the result are 1-based
    positions within the compared sequences.
    """
    es, et = as_ep(s), as_ep(t)
    if es is not None and et is not None:
        if start > 1:
            es, et = es.shift(start - 1), et.shift(start - 1)
        depth = max(len(es.pre), len(et.pre)) + math.lcm(len(es.period), len(et.period))
        a, b = es.prefix(depth), et.prefix(depth)
        k = _first_diff(a, b)
        if k is None:
            return LexResult("equal")
        return LexResult("less" if a[k] < b[k] else "greater", k + start)
    n = 64
    done = 0
    off = start - 1
    while done < depth_cap:
        n = min(n, depth_cap)
        a = s.prefix(off + n)[off:]
        b = t.prefix(off + n)[off:]
        k = _first_diff(a[done:], b[done:])
        if k is not None:
            k += done
            return LexResult("less" if a[k] < b[k] else "greater", k + start)
        done = n
        n *= 2
    return LexResult("equal_to_depth", depth_cap)


def compare_padded(a: str, b: str) -> int:
    """Compare finite words as sequences padded with 0^inf: -1, 0 or 1."""
    n = max(len(a), len(b))
    a, b = a.ljust(n, "0"), b.ljust(n, "0")
    return (a > b) - (a < b)


def compare_prefix(a: str, b: str) -> int:
    """Compare words of equal length."""
    if len(a) != len(b):
        raise ValueError("prefix comparison needs words of equal length")
    return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# admissible words


def is_admissible(a) -> bool:
    """reflect(a_1..a_{m-i}) <= a_{i+1}..a_m < a_1..a_{m-i} for 1 <= i < m."""
    w = _bits(a)
    if not w:
        raise ValueError("admissibility needs a nonempty word")
    m = len(w)
    for i in range(1, m):
        head = w[: m - i]
        tail = w[i:]
        if compare_padded(reflect(head), tail) > 0:
            return False
        if compare_padded(tail, head) >= 0:
            return False
    return True


# ---------------------------------------------------------------------------
# the index set S


def in_S(n: int) -> bool:
    """Membership in the recursively defined index set S (1 is not in S)."""
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        if n in (2, 3, 4):
            return True
        if n == 1:
            return False
        k = (n - 1).bit_length() - 1  # 2^k < n <= 2^(k+1)
        base = 3 << (k - 1)
        if n <= base:
            return False
        n -= base


def s_elements(limit: int) -> list[int]:
    return [n for n in range(1, limit + 1) if in_S(n)]


def s_count(k: int) -> int:
    """#{n <= 2^k : n in S}.

    The members in (2^j, 2^(j+1)] are 3*2^(j-1) + m with m in S and
    m <= 2^(j-1), so each dyadic block adds the count two levels down.
    """
    if k < 1:
        raise ValueError("k must be positive")
    counts = {1: 1, 2: 3}
    for j in range(3, k + 1):
        counts[j] = counts[j - 1] + counts[j - 2]
    return counts[k]


def lucas(k: int) -> int:
    a, b = 2, 1
    for _ in range(k):
        a, b = b, a + b
    return a
