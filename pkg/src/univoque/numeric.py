"""Exact and certified real arithmetic.

Real numbers come in a few tiers:

* ``Fraction`` for rationals (``int`` is accepted and promoted),
* ``QuadraticSurd`` for a + b*sqrt(d) with exact arithmetic,
* ``AlgebraicNumber``, a real root of an integer polynomial pinned down by a
  dyadic isolating interval, and ``FieldElement``, a rational expression in
  such a root,
* ``RefinableConstant``, known only through nested enclosures.

The first four are exact: their sign and equality are decidable.  Every
number can be enclosed in a ``DyadicInterval`` of any requested width, and
``compare`` never answers wrongly.  It reports ``UNDECIDED`` instead when a
refinable number cannot be separated at the precision cap.
"""

from __future__ import annotations

import contextlib
import enum
import math
import os
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import sympy

DEFAULT_START_BITS = 128
DEFAULT_PRECISION_CAP = 4096
_HARD_CEILING = 1 << 18  # exact comparisons always terminate, this is a safety net
# derived constants may refine their inputs a little past the cap for guard bits
GUARD_ALLOWANCE = 512


class PrecisionExhausted(ArithmeticError):
    """A refinable value could not be resolved within the precision cap."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NoRootInBracket(ValueError):
    """The expansion equation has no root in the requested bracket."""


_cap_local = threading.local()


@contextlib.contextmanager
def precision_limit(bits: int | None):
    """Temporarily set the precision cap for the current thread."""
    old = getattr(_cap_local, "cap", None)
    if bits is not None and bits < 64:
        raise DomainError("precision cap must be at least 64")
    _cap_local.cap = bits if bits is not None else old
    try:
        yield
    finally:
        _cap_local.cap = old


def precision_cap() -> int:
    """Working precision cap in bits, overridable by UNIVOQUE_PRECISION_CAP."""
    local = getattr(_cap_local, "cap", None)
    if local is not None:
        return local
    env = os.environ.get("UNIVOQUE_PRECISION_CAP")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"UNIVOQUE_PRECISION_CAP must be an integer, got {env!r}")
        if value < 64:
            raise DomainError("UNIVOQUE_PRECISION_CAP must be at least 64")
        return value
    return DEFAULT_PRECISION_CAP


# ---------------------------------------------------------------------------
# dyadic intervals


def _floor_scaled(x: Fraction, prec: int) -> int:
    return (x.numerator << prec) // x.denominator


def _ceil_scaled(x: Fraction, prec: int) -> int:
    return -((-x.numerator << prec) // x.denominator)


class DyadicInterval:
    """Closed interval [a/2^prec, b/2^prec] with integer a <= b."""

    __slots__ = ("a", "b", "prec")

    def __init__(self, a: int, b: int, prec: int):
        if a > b:
            raise ValueError("empty interval")
        self.a = a
        self.b = b
        self.prec = prec

    @classmethod
    def around(cls, x, prec: int) -> "DyadicInterval":
        """Smallest interval at precision ``prec`` containing the rational x."""
        x = Fraction(x)
        return cls(_floor_scaled(x, prec), _ceil_scaled(x, prec), prec)

    @property
    def lo(self) -> Fraction:
        return Fraction(self.a, 1 << self.prec)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.b, 1 << self.prec)

    def width(self) -> Fraction:
        return Fraction(self.b - self.a, 1 << self.prec)

    def width_ok(self, bits: int) -> bool:
        """True if the width is at most 2^-bits."""
        d = self.b - self.a
        if d == 0:
            return True
        shift = self.prec - bits
        if shift < 0:
            return False
        return d <= (1 << shift)

    def accuracy(self) -> int:
        """Largest k with width <= 2^-k (capped for point intervals)."""
        d = self.b - self.a
        if d == 0:
            return 1 << 30
        return self.prec - d.bit_length() + (1 if d & (d - 1) == 0 else 0)

    def midpoint(self) -> Fraction:
        return Fraction(self.a + self.b, 1 << (self.prec + 1))

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self) -> str:
        return f"DyadicInterval[{float(self.lo)!r}, {float(self.hi)!r}]"

    def __str__(self) -> str:
        return format_interval(self)

    def certain_sign(self):
        if self.a > 0:
            return 1
        if self.b < 0:
            return -1
        if self.a == 0 and self.b == 0:
            return 0
        return None

    def contains(self, x) -> bool:
        if isinstance(x, DyadicInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def disjoint(self, other: "DyadicInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def intersect(self, other: "DyadicInterval") -> "DyadicInterval":
        p = max(self.prec, other.prec)
        a1, b1 = self._at(p)
        a2, b2 = other._at(p)
        a, b = max(a1, a2), min(b1, b2)
        if a > b:
            raise ArithmeticError("enclosures of the same number are disjoint")
        return DyadicInterval(a, b, p)

    def hull(self, other: "DyadicInterval") -> "DyadicInterval":
        p = max(self.prec, other.prec)
        a1, b1 = self._at(p)
        a2, b2 = other._at(p)
        return DyadicInterval(min(a1, a2), max(b1, b2), p)

    def _at(self, p: int):
        if p >= self.prec:
            s = p - self.prec
            return self.a << s, self.b << s
        s = self.prec - p
        return self.a >> s, -((-self.b) >> s)

    def with_prec(self, p: int) -> "DyadicInterval":
        a, b = self._at(p)
        return DyadicInterval(a, b, p)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other, p):
        if isinstance(other, DyadicInterval):
            return other._at(p)
        if isinstance(other, int):
            return other << p, other << p
        if isinstance(other, Fraction):
            return _floor_scaled(other, p), _ceil_scaled(other, p)
        return None

    def __add__(self, other):
        p = max(self.prec, other.prec) if isinstance(other, DyadicInterval) else self.prec
        o = self._coerce(other, p)
        if o is None:
            return NotImplemented
        a, b = self._at(p)
        return DyadicInterval(a + o[0], b + o[1], p)

    __radd__ = __add__

    def __neg__(self):
        return DyadicInterval(-self.b, -self.a, self.prec)

    def __sub__(self, other):
        p = max(self.prec, other.prec) if isinstance(other, DyadicInterval) else self.prec
        o = self._coerce(other, p)
        if o is None:
            return NotImplemented
        a, b = self._at(p)
        return DyadicInterval(a - o[1], b - o[0], p)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other >= 0:
                return DyadicInterval(self.a * other, self.b * other, self.prec)
            return DyadicInterval(self.b * other, self.a * other, self.prec)
        p = max(self.prec, other.prec) if isinstance(other, DyadicInterval) else self.prec
        o = self._coerce(other, p)
        if o is None:
            return NotImplemented
        a, b = self._at(p)
        c, d = o
        if a >= 0 and c >= 0:
            lo, hi = a * c, b * d
        else:
            prods = (a * c, a * d, b * c, b * d)
            lo, hi = min(prods), max(prods)
        return DyadicInterval(lo >> p, -((-hi) >> p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = max(self.prec, other.prec) if isinstance(other, DyadicInterval) else self.prec
        o = self._coerce(other, p)
        if o is None:
            return NotImplemented
        c, d = o
        if c <= 0 <= d:
            raise ZeroDivisionError("interval division by an interval containing 0")
        a, b = self._at(p)
        a <<= p
        b <<= p
        if c > 0 and a >= 0:
            lo, hi = a // d, -((-b) // c)
        else:
            cands_lo = [x // y for x in (a, b) for y in (c, d)]
            cands_hi = [-((-x) // y) for x in (a, b) for y in (c, d)]
            lo, hi = min(cands_lo), max(cands_hi)
        return DyadicInterval(lo, hi, p)

    def __rtruediv__(self, other):
        p = self.prec
        o = self._coerce(other, p)
        if o is None:
            return NotImplemented
        return DyadicInterval(o[0], o[1], p) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        result = DyadicInterval(1 << self.prec, 1 << self.prec, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def format_interval(iv: DyadicInterval, digits: int = 20) -> str:
    """Print an enclosure as [lo, hi] with outward-rounded decimals."""
    scale = 10 ** digits
    lo = iv.lo * scale
    hi = iv.hi * scale
    lo_i = math.floor(lo)
    hi_i = math.ceil(hi)
    return f"[{_dec(lo_i, digits)}, {_dec(hi_i, digits)}]"


def _dec(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    n = abs(n)
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


# ---------------------------------------------------------------------------
# integer polynomials (coefficient tuples, highest degree first)


def _strip(coeffs):
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return tuple(coeffs[i:])


def int_poly(coeffs) -> tuple:
    """Primitive integer polynomial with positive leading coefficient."""
    fr = [Fraction(c) for c in coeffs]
    fr = list(_strip(fr))
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g == 0:
        return (0,)
    ints = [c // g for c in ints]
    if ints[0] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_add(p, q):
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return [a + b for a, b in zip(p, q)]


def poly_scale(p, c):
    return [a * c for a in p]


def poly_derivative(coeffs):
    d = len(coeffs) - 1
    return tuple(c * (d - i) for i, c in enumerate(coeffs[:-1])) or (0,)


def _peval_scaled(coeffs, num: int, prec: int) -> int:
    """p(num/2^prec) * 2^(prec*deg), computed exactly."""
    acc = 0
    for i, c in enumerate(coeffs):
        acc = acc * num + (c << (prec * i))
    return acc


def _horner_fixed(coeffs, num: int, prec: int, W: int):
    """Bounds lo <= p(num/2^prec) * 2^W <= hi by fixed-point Horner."""
    lo = hi = coeffs[0] << W
    for c in coeffs[1:]:
        if num >= 0:
            lo, hi = (lo * num) >> prec, -((-hi * num) >> prec)
        else:
            lo, hi = (hi * num) >> prec, -((-lo * num) >> prec)
        lo += c << W
        hi += c << W
    return lo, hi


def _fixed_work(coeffs, num: int, prec: int) -> int:
    xb = max(1, (abs(num) >> prec).bit_length())
    cb = max(abs(c).bit_length() for c in coeffs)
    return prec + (len(coeffs) - 1) * xb + cb + 64


def _lambda_form(coeffs, num: int, prec: int, W: int):
    """Bounds on p(x) / x^deg * 2^W for x = num/2^prec > 0, via Horner in 1/x.

    For roots in (1, 2] this normalization keeps all intermediate values
    bounded, so W only needs to exceed the target accuracy by a few bits.
    """
    one = 1 << (W + prec)
    l1, l2 = one // num, -((-one) // num)
    lo = hi = coeffs[-1] << W
    for c in reversed(coeffs[:-1]):
        if lo >= 0:
            a, b = lo * l1, hi * l2
        elif hi <= 0:
            a, b = lo * l2, hi * l1
        else:
            a, b = lo * l2, hi * l2
        lo = (a >> W) + (c << W)
        hi = -((-b) >> W) + (c << W)
    return lo, hi


def _psign(coeffs, num: int, prec: int) -> int:
    """Exact sign of p(num/2^prec); interval Horner first, exact fallback."""
    if num > (1 << prec):
        cb = max(abs(c).bit_length() for c in coeffs)
        lo, hi = _lambda_form(coeffs, num, prec, prec + 2 * len(coeffs).bit_length() + cb + 40)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    lo, hi = _horner_fixed(coeffs, num, prec, _fixed_work(coeffs, num, prec))
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    v = _peval_scaled(coeffs, num, prec)
    return (v > 0) - (v < 0)


def poly_eval_interval(coeffs, x: DyadicInterval, work: int) -> DyadicInterval:
    """Enclosure of p(x) by Horner's rule at working precision ``work``."""
    xi = x.with_prec(max(work, x.prec))
    acc = DyadicInterval.around(Fraction(coeffs[0]), xi.prec)
    for c in coeffs[1:]:
        acc = acc * xi + Fraction(c)
    return acc


_T = sympy.Symbol("t")


def _sym(coeffs):
    return sympy.Poly(list(coeffs), _T, domain="QQ")


def _from_sym(p) -> tuple:
    return int_poly(p.all_coeffs())


def poly_gcd(p, q) -> tuple:
    return _from_sym(sympy.gcd(_sym(p), _sym(q)))


def poly_rem(p, q) -> tuple:
    """Remainder over Q, returned as a rational coefficient tuple."""
    r = _sym(p).rem(_sym(q))
    return tuple(Fraction(int(c.p), int(c.q)) for c in r.all_coeffs())


def count_roots(coeffs, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in [lo, hi] (Sturm)."""
    p = sympy.Poly(list(coeffs), _T, domain="ZZ")
    return int(p.sqf_part().count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                        sympy.Rational(hi.numerator, hi.denominator)))


def format_poly(coeffs, var: str = "q") -> str:
    d = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = d - i
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + var + (f"^{e}" if e > 1 else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# quadratic surds


def _squarefree_split(d: int):
    """d = k^2 * s with s squarefree; returns (k, s)."""
    k, s = 1, d
    f = 2
    while f * f <= s:
        while s % (f * f) == 0:
            s //= f * f
            k *= f
        f += 1
    return k, s


class QuadraticSurd:
    """The real number a + b*sqrt(d), with a and b rational and d squarefree."""

    __slots__ = ("a", "b", "d", "_alg")

    def __init__(self, a, b, d: int):
        a, b = Fraction(a), Fraction(b)
        if d <= 0:
            raise DomainError("sqrt of a non-positive integer")
        k, s = _squarefree_split(d)
        self.a = a
        self.b = b * k
        self.d = s
        self._alg = None

    @staticmethod
    def make(a, b, d: int):
        """Like the constructor, but collapses to a Fraction when rational."""
        q = QuadraticSurd(a, b, d)
        if q.b == 0 or q.d == 1:
            return q.a + q.b * (1 if q.d == 1 else 0)
        return q

    @staticmethod
    def sqrt(n) -> "Number":
        n = Fraction(n)
        if n < 0:
            raise DomainError("sqrt of a negative number")
        # sqrt(p/q) = sqrt(p*q)/q
        return QuadraticSurd.make(0, Fraction(1, n.denominator), n.numerator * n.denominator)

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        parts = []
        if self.a:
            parts.append(str(self.a))
        b = self.b
        root = f"sqrt({self.d})"
        if b == 1:
            t = root
        elif b == -1:
            t = "-" + root
        elif b.denominator == 1:
            t = f"{b}*{root}"
        elif abs(b.numerator) == 1:
            t = ("-" if b < 0 else "") + f"{root}/{b.denominator}"
        else:
            t = f"{b.numerator}*{root}/{b.denominator}"
        if parts:
            return parts[0] + (" - " + t[1:] if t.startswith("-") else " + " + t)
        return t

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        a, b = self.a, self.b
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def conjugate(self):
        return QuadraticSurd(self.a, -self.b, self.d)

    def enclose(self, bits: int) -> DyadicInterval:
        babs = abs(self.b)
        extra = max(0, babs.numerator.bit_length() - babs.denominator.bit_length() + 1)
        p = bits + extra + 4
        s = math.isqrt(self.d << (2 * p))
        lo_r = Fraction(s, 1 << p)
        hi_r = Fraction(s + 1, 1 << p)
        if self.b >= 0:
            lo, hi = self.a + self.b * lo_r, self.a + self.b * hi_r
        else:
            lo, hi = self.a + self.b * hi_r, self.a + self.b * lo_r
        q = bits + 2
        return DyadicInterval(_floor_scaled(lo, q), _ceil_scaled(hi, q), q)

    def to_algebraic(self) -> "AlgebraicNumber":
        if self._alg is None:
            # (t - a)^2 - b^2 d
            poly = int_poly([1, -2 * self.a, self.a * self.a - self.b * self.b * self.d])
            gap = abs(self.b)  # half the distance to the conjugate is |b| sqrt(d) > |b|
            bits = 8
            while Fraction(1, 1 << bits) >= gap / 2:
                bits += 8
            iv = self.enclose(bits)
            self._alg = AlgebraicNumber(poly, iv.lo - Fraction(1, 1 << (bits + 1)),
                                        iv.hi + Fraction(1, 1 << (bits + 1)), check=False)
        return self._alg

    # exact arithmetic within Q(sqrt d) --------------------------------------

    def _same(self, other):
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        if isinstance(other, QuadraticSurd) and other.d == self.d:
            return other.a, other.b
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return _generic_binop("+", self, other)
        return QuadraticSurd.make(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return _generic_binop("-", self, other)
        return QuadraticSurd.make(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._same(other)
        if o is None:
            return _generic_binop("*", self, other)
        c, e = o
        return QuadraticSurd.make(self.a * c + self.b * e * self.d, self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._same(other)
        if o is None:
            return _generic_binop("/", self, other)
        c, e = o
        norm = c * c - e * e * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        # (a + b r)(c - e r) / norm
        return QuadraticSurd.make((self.a * c - self.b * e * self.d) / norm,
                                  (self.b * c - self.a * e) / norm, self.d)

    def __rtruediv__(self, other):
        o = self._same(other)
        if o is None:
            return _generic_binop("/", other, self)
        return QuadraticSurd(o[0], o[1], self.d) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = base * result
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return self.a == o[0] and self.b == o[1]

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)


# ---------------------------------------------------------------------------
# real algebraic numbers


def _refine_poly_root(coeffs, dcoeffs, a: int, b: int, prec: int, s_a: int, bits: int):
    """Shrink the bracket [a, b]/2^prec around the simple root of ``coeffs``.

    ``s_a`` is the sign of the polynomial at the left endpoint; the right
    endpoint has the opposite sign.  Uses Newton steps verified by exact sign
    evaluation, falling back to bisection.
    """
    while True:
        iv = DyadicInterval(a, b, prec)
        if iv.width_ok(bits):
            return a, b, prec
        acc = max(iv.accuracy(), 1)
        # Newton roughly doubles the accuracy, minus a loss that grows with the degree
        target = min(bits + 2, 2 * acc - len(coeffs).bit_length() - 4)
        if target <= acc + 1:
            target = acc + 1
        q = max(target + 8, prec)
        A, B = a << (q - prec), b << (q - prec)
        c = (A + B) >> 1
        if c > (1 << q):
            # p/p' is unchanged by scaling both with x^-deg; p' * x^-(deg-1) * (1/x)
            W = q + 2 * len(coeffs).bit_length() + 48
            plo, phi = _lambda_form(coeffs, c, q, W)
            dlo, dhi = _lambda_form(dcoeffs, c, q, W)
            dlo, dhi = (dlo << q) // c, (dhi << q) // c
        else:
            W = _fixed_work(coeffs, c, q)
            plo, phi = _horner_fixed(coeffs, c, q, W)
            dlo, dhi = _horner_fixed(dcoeffs, c, q, W)
        pv = (plo + phi) >> 1
        dv = (dlo + dhi) >> 1
        accepted = False
        if dv != 0:
            step = ((pv << q) * 2 + dv) // (2 * dv)
            c2 = c - step
            eps = 1 << max(q - target - 1, 0)
            lo, hi = max(c2 - eps, A), min(c2 + eps, B)
            if lo < hi:
                sl = _psign(coeffs, lo, q) if lo != A else s_a
                sh = _psign(coeffs, hi, q) if hi != B else -s_a
                if sl == 0:
                    return _point_bracket(lo, q, bits)
                if sh == 0:
                    return _point_bracket(hi, q, bits)
                if sl == s_a and sh == -s_a:
                    a, b, prec = lo, hi, q
                    accepted = True
        if not accepted:
            for _ in range(8):
                m = (A + B) >> 1
                if m == A:
                    A, B, q = A << 1, B << 1, q + 1
                    m = (A + B) >> 1
                sm = _psign(coeffs, m, q)
                if sm == 0:
                    return _point_bracket(m, q, bits)
                if sm == s_a:
                    A = m
                else:
                    B = m
            a, b, prec = A, B, q


def _point_bracket(m: int, q: int, bits: int):
    r = max(q, bits + 2) + 1
    m <<= r - q
    return m - 1, m + 1, r


class AlgebraicNumber:
    """The unique root of an integer polynomial inside a dyadic isolator.

    ``poly`` is any squarefree-at-the-root integer polynomial (highest degree
    first) with exactly one root strictly inside [lo, hi] and a sign change
    across it.  ``minpoly()`` factors it down to the irreducible factor.
    """

    def __init__(self, poly: Sequence[int], lo, hi, *, check: bool = True, name: str | None = None):
        poly = int_poly(poly)
        if len(poly) < 2:
            raise DomainError("polynomial must have positive degree")
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise DomainError("isolator must have lo < hi")
        prec = max(lo.denominator.bit_length(), hi.denominator.bit_length(), 1)
        a, b = _floor_scaled(lo, prec), _ceil_scaled(hi, prec)
        sa, sb = _psign(poly, a, prec), _psign(poly, b, prec)
        if sa == 0 or sb == 0 or sa == sb:
            raise DomainError("isolator endpoints must bracket a sign change")
        if check and count_roots(poly, Fraction(a, 1 << prec), Fraction(b, 1 << prec)) != 1:
            raise DomainError("isolator does not isolate a single root")
        self._poly = poly
        self._dpoly = poly_derivative(poly)
        self._iso = (a, b, prec)
        self._sa = sa
        self._minpoly = None
        self._lock = threading.RLock()
        self.name = name

    @property
    def poly(self) -> tuple:
        return self._poly

    @property
    def degree_bound(self) -> int:
        return len(self._poly) - 1

    def isolator(self) -> DyadicInterval:
        a, b, p = self._iso
        return DyadicInterval(a, b, p)

    def enclose(self, bits: int) -> DyadicInterval:
        with self._lock:
            a, b, p = self._iso
            if not DyadicInterval(a, b, p).width_ok(bits):
                a, b, p = _refine_poly_root(self._poly, self._dpoly, a, b, p, self._sa, bits)
                if _psign(self._poly, a, p) != self._sa:
                    raise AssertionError("refinement lost the root")
                self._iso = (a, b, p)
            return DyadicInterval(a, b, p)

    def is_root_of(self, divisor) -> bool:
        """Whether this number is a root of ``divisor``, which must divide poly."""
        divisor = int_poly(divisor)
        if len(divisor) < 2:
            return False
        a, b, p = self._iso
        s1, s2 = _psign(divisor, a, p), _psign(divisor, b, p)
        return s1 != 0 and s2 != 0 and s1 != s2

    def minpoly(self) -> tuple:
        """Irreducible integer polynomial of this number (primitive, lc > 0)."""
        with self._lock:
            if self._minpoly is None:
                if len(self._poly) == 2:
                    self._minpoly = self._poly
                else:
                    _, factors = _sym(self._poly).factor_list()
                    cands = [_from_sym(f) for f, _ in factors]
                    cands = [f for f in cands if len(f) > 1 and self.is_root_of(f)]
                    if len(cands) != 1:
                        raise AssertionError("could not single out the minimal polynomial")
                    self._minpoly = cands[0]
                    self._adopt(self._minpoly)
            return self._minpoly

    def set_known_minpoly(self, poly) -> None:
        """Adopt an irreducible factor known from theory (checked to vanish here)."""
        poly = int_poly(poly)
        if not self.is_root_of(poly):
            raise DomainError("supplied polynomial does not vanish at this number")
        with self._lock:
            self._minpoly = poly
            self._adopt(poly)

    def _adopt(self, poly):
        # switch the working polynomial to the smaller factor
        a, b, p = self._iso
        self._poly = poly
        self._dpoly = poly_derivative(poly)
        self._sa = _psign(poly, a, p)

    def rational_value(self):
        """The value as a Fraction when the minimal polynomial is linear."""
        m = self.minpoly()
        if len(m) == 2:
            return Fraction(-m[1], m[0])
        return None

    def __float__(self):
        return float(self.enclose(60))

    def __repr__(self):
        label = self.name or format_poly(self._poly)
        return f"AlgebraicNumber({label} ~ {float(self):.12g})"

    # arithmetic lifts to the number field ---------------------------------

    def as_element(self) -> "FieldElement":
        return FieldElement(self, (Fraction(0), Fraction(1)), (Fraction(1),))

    def __add__(self, other):
        return self.as_element() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.as_element() - other

    def __rsub__(self, other):
        return other - self.as_element() if not isinstance(other, (int, Fraction)) else \
            FieldElement.from_rational(self, other) - self.as_element()

    def __mul__(self, other):
        return self.as_element() * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.as_element() / other

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(self, other) / self.as_element()
        return _generic_binop("/", other, self)

    def __neg__(self):
        return -self.as_element()

    def __pow__(self, n: int):
        return self.as_element() ** n


def sign_of_poly_at(p, a: "AlgebraicNumber | QuadraticSurd | Fraction") -> int:
    """Exact sign of the rational polynomial p (highest degree first) at a."""
    if isinstance(a, (int, Fraction)):
        a = Fraction(a)
        v = Fraction(0)
        for c in p:
            v = v * a + Fraction(c)
        return (v > 0) - (v < 0)
    if isinstance(a, QuadraticSurd):
        a = a.to_algebraic()
    coeffs = int_poly(p)
    if coeffs == (0,):
        return 0
    # int_poly makes the leading coefficient positive; remember the flip
    lead = next(Fraction(c) for c in p if Fraction(c) != 0)
    flip = -1 if lead < 0 else 1
    if len(coeffs) == 1:
        return flip
    if len(coeffs) > len(a.poly) - 1:
        r = poly_rem(coeffs, a.poly)
        r_int = int_poly(r)
        if r_int == (0,):
            return 0
        # the remainder over Q equals p at a; keep its own sign convention
        lead_r = next(c for c in r if c != 0)
        flip_r = -1 if lead_r < 0 else 1
        return flip * flip_r * _sign_reduced(r_int, a)
    return flip * _sign_reduced(coeffs, a)


def _sign_reduced(coeffs, a: AlgebraicNumber) -> int:
    if len(coeffs) == 1:
        return 1 if coeffs[0] > 0 else (-1 if coeffs[0] < 0 else 0)
    cbits = max(abs(c).bit_length() for c in coeffs) + len(coeffs)
    bits = 64
    tried_exact = False
    while True:
        iv = poly_eval_interval(coeffs, a.enclose(bits), bits + cbits + 16)
        s = iv.certain_sign()
        if s is not None and s != 0:
            return s
        if not tried_exact and bits >= 128:
            tried_exact = True
            g = poly_gcd(coeffs, a.poly)
            if len(g) > 1 and a.is_root_of(g):
                return 0
        bits *= 2
        if bits > _HARD_CEILING:
            raise PrecisionExhausted("sign determination exceeded the hard ceiling")


# ---------------------------------------------------------------------------
# elements of Q(theta)


class FieldElement:
    """num(theta)/den(theta) for an algebraic theta; polynomials lowest degree first."""

    __slots__ = ("gen", "num", "den", "_alg", "_cache", "_lock")

    def __init__(self, gen: AlgebraicNumber, num, den):
        self.gen = gen
        self.num = tuple(Fraction(c) for c in num)
        self.den = tuple(Fraction(c) for c in den)
        if all(c == 0 for c in self.den):
            raise ZeroDivisionError("zero denominator")
        self._alg = None
        self._cache = None
        self._lock = threading.RLock()

    @classmethod
    def from_rational(cls, gen: AlgebraicNumber, r) -> "FieldElement":
        return cls(gen, (Fraction(r),), (Fraction(1),))

    @staticmethod
    def _hl(p):
        return tuple(reversed(p))

    def _reduce(self, p):
        p = list(p)
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        m = self.gen.poly
        if len(p) >= len(m):
            r = poly_rem(self._hl(p), m)
            return tuple(reversed(r))
        return tuple(p)

    def _pmul(self, p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if x:
                for j, y in enumerate(q):
                    out[i + j] += x * y
        return self._reduce(out)

    @staticmethod
    def _padd(p, q, sign=1):
        n = max(len(p), len(q))
        p = list(p) + [Fraction(0)] * (n - len(p))
        q = list(q) + [Fraction(0)] * (n - len(q))
        return tuple(x + sign * y for x, y in zip(p, q))

    def _lift(self, other):
        if isinstance(other, FieldElement) and other.gen is self.gen:
            return other
        if isinstance(other, AlgebraicNumber) and other is self.gen:
            return other.as_element()
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(self.gen, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return _generic_binop("+", self, other)
        num = self._padd(self._pmul(self.num, o.den), self._pmul(o.num, self.den))
        return FieldElement(self.gen, num, self._pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.gen, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return _generic_binop("-", self, other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return _generic_binop("*", self, other)
        return FieldElement(self.gen, self._pmul(self.num, o.num), self._pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _generic_binop("/", self, other)
        if o.sign() == 0:
            raise ZeroDivisionError("division by zero")
        return FieldElement(self.gen, self._pmul(self.num, o.den), self._pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _generic_binop("/", other, self)
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        result = FieldElement.from_rational(self.gen, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _sign_of(self, p) -> int:
        return sign_of_poly_at(self._hl(p), self.gen)

    def sign(self) -> int:
        return self._sign_of(self.num) * self._sign_of(self.den)

    def equals(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            raise TypeError("not in the same field")
        diff = self._padd(self._pmul(self.num, o.den), self._pmul(o.num, self.den), -1)
        return self._sign_of(diff) == 0

    def rational_value(self):
        """The value as a Fraction if num/den reduces to a constant."""
        if len(self.num) == 1 and len(self.den) == 1:
            return self.num[0] / self.den[0]
        return None

    def enclose(self, bits: int) -> DyadicInterval:
        with self._lock:
            if self._cache is not None and self._cache.width_ok(bits):
                return self._cache
            cbits = max(max(abs(c.numerator).bit_length(), c.denominator.bit_length())
                        for c in self.num + self.den) + len(self.num) + len(self.den)
            extra = 8
            while True:
                g = self.gen.enclose(bits + extra + cbits)
                work = bits + extra + 2 * cbits + 16
                n = poly_eval_interval(self._hl(self.num), g, work)
                d = poly_eval_interval(self._hl(self.den), g, work)
                if d.certain_sign() not in (None, 0):
                    iv = n / d
                    if iv.width_ok(bits):
                        if self._cache is not None:
                            iv = iv.intersect(self._cache)
                        self._cache = iv
                        return iv
                extra *= 2
                if extra > _HARD_CEILING:
                    raise PrecisionExhausted("field element enclosure did not converge")

    def to_algebraic(self) -> AlgebraicNumber:
        """The same number as an AlgebraicNumber (minimal polynomial via a resultant)."""
        with self._lock:
            if self._alg is None:
                y = sympy.Symbol("y")
                num = sum(sympy.Rational(c.numerator, c.denominator) * _T ** i for i, c in enumerate(self.num))
                den = sum(sympy.Rational(c.numerator, c.denominator) * _T ** i for i, c in enumerate(self.den))
                m = sum(c * _T ** (len(self.gen.poly) - 1 - i) for i, c in enumerate(self.gen.poly))
                res = sympy.Poly(sympy.resultant(m, y * den - num, _T), y)
                poly = int_poly(res.sqf_part().all_coeffs())
                bits = 32
                while True:
                    iv = self.enclose(bits)
                    lo, hi = iv.lo - iv.width(), iv.hi + iv.width()
                    if lo == hi:
                        lo, hi = lo - Fraction(1, 1 << bits), hi + Fraction(1, 1 << bits)
                    try:
                        self._alg = AlgebraicNumber(poly, lo, hi, check=True)
                        break
                    except DomainError:
                        bits *= 2
                        if bits > _HARD_CEILING:
                            raise PrecisionExhausted("could not isolate a field element")
            return self._alg

    def __float__(self):
        return float(self.enclose(60))

    def __repr__(self):
        return f"FieldElement(~{float(self):.12g} in Q({self.gen!r}))"


# ---------------------------------------------------------------------------
# refinable constants


class RefinableConstant:
    """A real number known through certified enclosures of any width.

    ``refine(bits)`` must return a DyadicInterval containing the number with
    width at most 2^-bits.  Results are intersected so that successive
    enclosures are nested.  ``tag`` optionally records a symbolic identity,
    e.g. ``("eval", digits, base)`` for the value of an expansion at a base.
    """

    def __init__(self, refine: Callable[[int], DyadicInterval], *, tag=None, name: str | None = None):
        self._refine = refine
        self.tag = tag
        self.name = name
        self._cache: DyadicInterval | None = None
        self._lock = threading.RLock()

    def enclose(self, bits: int) -> DyadicInterval:
        with self._lock:
            if self._cache is not None and self._cache.width_ok(bits):
                return self._cache
            if bits > precision_cap() + GUARD_ALLOWANCE:
                raise PrecisionExhausted(
                    f"{self.name or 'constant'}: {bits} bits requested, cap is {precision_cap()}")
            iv = self._refine(bits)
            if not iv.width_ok(bits):
                raise AssertionError("refine() returned an enclosure that is too wide")
            if self._cache is not None:
                iv = iv.intersect(self._cache)
            self._cache = iv
            return iv

    def __float__(self):
        return float(self.enclose(60))

    def __repr__(self):
        return f"RefinableConstant({self.name or ''} ~ {float(self):.12g})"

    def __add__(self, other):
        return _generic_binop("+", self, other)

    def __radd__(self, other):
        return _generic_binop("+", other, self)

    def __sub__(self, other):
        return _generic_binop("-", self, other)

    def __rsub__(self, other):
        return _generic_binop("-", other, self)

    def __mul__(self, other):
        return _generic_binop("*", self, other)

    def __rmul__(self, other):
        return _generic_binop("*", other, self)

    def __truediv__(self, other):
        return _generic_binop("/", self, other)

    def __rtruediv__(self, other):
        return _generic_binop("/", other, self)

    def __neg__(self):
        return lift(lambda x: -x, [self], name=f"-({self.name})" if self.name else None)

    def __pow__(self, n: int):
        return lift(lambda x: x ** n, [self])


Number = Union[Fraction, QuadraticSurd, AlgebraicNumber, FieldElement, RefinableConstant]


def as_number(v) -> Number:
    if isinstance(v, bool):
        raise TypeError("bool is not a number")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, (Fraction, QuadraticSurd, AlgebraicNumber, FieldElement, RefinableConstant)):
        return v
    raise TypeError(f"not a Number: {v!r}")


def is_exact(v) -> bool:
    return isinstance(v, (int, Fraction, QuadraticSurd, AlgebraicNumber, FieldElement))


def enclose(v, bits: int) -> DyadicInterval:
    """Certified enclosure of width at most 2^-bits."""
    if bits < 1:
        bits = 1
    if isinstance(v, (int, Fraction)):
        return DyadicInterval.around(Fraction(v), bits)
    return v.enclose(bits)


def lift(fn: Callable[..., DyadicInterval], args, *, tag=None, name=None) -> RefinableConstant:
    """A RefinableConstant computed by applying an interval function to args."""
    args = [as_number(a) for a in args]

    def refine(bits: int) -> DyadicInterval:
        guard = 16
        while True:
            ivs = [enclose(a, bits + guard) for a in args]
            iv = fn(*[x.with_prec(bits + guard + 8) for x in ivs])
            if iv.width_ok(bits):
                return iv
            guard *= 2
            if guard > 4 * precision_cap():
                raise PrecisionExhausted("derived constant did not reach the requested width")

    return RefinableConstant(refine, tag=tag, name=name)


_OPS = {
    "+": lambda x, y: x + y,
    "-": lambda x, y: x - y,
    "*": lambda x, y: x * y,
    "/": lambda x, y: x / y,
}


def _generic_binop(op: str, x, y) -> Number:
    """Arithmetic across tiers: exact when possible, refinable otherwise."""
    x, y = as_number(x), as_number(y)
    if isinstance(x, QuadraticSurd) and isinstance(y, QuadraticSurd) and x.d == y.d:
        return _OPS[op](x, y)
    if op == "/" and compare(y, 0) == Ordering.EQUAL:
        raise ZeroDivisionError("division by zero")
    return lift(_OPS[op], [x, y])


# ---------------------------------------------------------------------------
# comparison


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNDECIDED = "undecided-at-cap"


def _to_alg(v):
    if isinstance(v, AlgebraicNumber):
        return v
    if isinstance(v, QuadraticSurd):
        return v.to_algebraic()
    if isinstance(v, FieldElement):
        r = v.rational_value()
        if r is not None:
            return r
        return v.to_algebraic()
    return Fraction(v)


def _alg_equal(x: AlgebraicNumber, y: AlgebraicNumber) -> bool:
    if x is y:
        return True
    g = poly_gcd(x.poly, y.poly)
    if len(g) < 2 or not x.is_root_of(g) or not y.is_root_of(g):
        return False
    # g divides x.poly, so x is the only root of g inside x's isolator and
    # y == x exactly when y lands there; its endpoints are never roots of g.
    iso = x.isolator()
    bits = 32
    while True:
        iy = y.enclose(bits)
        if iy.disjoint(iso):
            return False
        if iso.lo < iy.lo and iy.hi < iso.hi:
            return True
        bits *= 2


def exact_equal(x, y) -> bool:
    """Decide x == y for exact-tier numbers."""
    x, y = as_number(x), as_number(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    if isinstance(x, QuadraticSurd) and isinstance(y, (Fraction, QuadraticSurd)):
        o = x._same(y)
        if o is not None:
            return x.a == o[0] and x.b == o[1]
    if isinstance(y, QuadraticSurd) and isinstance(x, Fraction):
        return False
    for a, b in ((x, y), (y, x)):
        if isinstance(a, FieldElement):
            lifted = a._lift(b)
            if lifted is not None:
                return a.equals(lifted)
            if isinstance(b, FieldElement) and b.gen is not a.gen:
                break
    for a, b in ((x, y), (y, x)):
        if isinstance(a, AlgebraicNumber) and isinstance(b, Fraction):
            return sign_of_poly_at((b.denominator, -b.numerator), a) == 0
        if isinstance(a, FieldElement) and isinstance(b, AlgebraicNumber) and b is not a.gen:
            # b = a  iff  a is a root of b's polynomial and lies in b's isolator
            val = FieldElement.from_rational(a.gen, 0)
            for c in b.poly:
                val = val * a + c
            if val.sign() != 0:
                return False
            break
    ax, ay = _to_alg(x), _to_alg(y)
    if isinstance(ax, Fraction) or isinstance(ay, Fraction):
        if isinstance(ax, Fraction) and isinstance(ay, Fraction):
            return ax == ay
        alg, r = (ay, ax) if isinstance(ax, Fraction) else (ax, ay)
        return sign_of_poly_at((r.denominator, -r.numerator), alg) == 0
    return _alg_equal(ax, ay)


def compare(a, b, cap: int | None = None) -> Ordering:
    """Certified comparison of two Numbers.

    EQUAL is returned only for exact-tier arguments whose equality is decided
    exactly; UNDECIDED only when a refinable argument cannot be separated
    within ``cap`` bits.
    """
    a, b = as_number(a), as_number(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
    if isinstance(a, (Fraction, QuadraticSurd)) and isinstance(b, (Fraction, QuadraticSurd)):
        if not (isinstance(a, QuadraticSurd) and isinstance(b, QuadraticSurd) and a.d != b.d):
            diff = a - b
            s = diff.sign() if isinstance(diff, QuadraticSurd) else (diff > 0) - (diff < 0)
            return {-1: Ordering.LESS, 0: Ordering.EQUAL, 1: Ordering.GREATER}[s]
    if a is b:
        if is_exact(a):
            return Ordering.EQUAL
        return Ordering.UNDECIDED
    cap = precision_cap() if cap is None else cap
    both_exact = is_exact(a) and is_exact(b)
    bits = 64
    tried = False
    while True:
        try:
            ia, ib = enclose(a, bits), enclose(b, bits)
        except PrecisionExhausted:
            return Ordering.UNDECIDED
        if ia.hi < ib.lo:
            return Ordering.LESS
        if ia.lo > ib.hi:
            return Ordering.GREATER
        if both_exact and not tried and bits >= 128:
            tried = True
            if exact_equal(a, b):
                return Ordering.EQUAL
        bits *= 2
        if bits > cap and not both_exact:
            return Ordering.UNDECIDED
        if bits > _HARD_CEILING:
            raise PrecisionExhausted("exact comparison exceeded the hard ceiling")


def sign(v, cap: int | None = None):
    """-1, 0, +1, or None when a refinable value is undecided at the cap."""
    c = compare(v, 0, cap)
    return {Ordering.LESS: -1, Ordering.EQUAL: 0, Ordering.GREATER: 1}.get(c)


def less(a, b, cap: int | None = None) -> bool:
    """Certified a < b; raises PrecisionExhausted if undecided."""
    c = compare(a, b, cap)
    if c == Ordering.UNDECIDED:
        raise PrecisionExhausted("comparison undecided at the precision cap")
    return c == Ordering.LESS


def to_fraction_if_rational(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, FieldElement):
        return v.rational_value()
    return None


# ---------------------------------------------------------------------------
# certified roots of monotone functions


def monotone_root(G: Callable[[DyadicInterval, int], DyadicInterval], lo: DyadicInterval,
                  hi: DyadicInterval, bits: int, cap: int | None = None) -> DyadicInterval:
    """Bracket the root of a strictly decreasing function.

    ``G(point, work)`` returns an enclosure of G at the dyadic point interval
    ``point`` computed at working precision ``work``.  ``lo`` and ``hi`` are
    point intervals with G(lo) > 0 > G(hi).  Returns [l, h] with G(l) > 0 >
    G(h) certified and width at most 2^-bits.  Uses secant estimates with a
    two-sided probe, so convergence is superlinear for smooth G.
    """
    cap = precision_cap() if cap is None else cap
    prec = max(lo.prec, hi.prec)
    a, b = lo.with_prec(prec).a, hi.with_prec(prec).a
    ga = gb = None
    stalls = 0
    while True:
        cur = DyadicInterval(a, b, prec)
        if cur.width_ok(bits):
            return cur
        acc = max(cur.accuracy(), 1)
        target = min(bits + 2, 2 * acc + 6)
        target = max(target, acc + 2)
        q = max(prec, target + 8)
        A, B = a << (q - prec), b << (q - prec)
        work = target + 24
        if ga is None or gb is None:
            ga = _mid(G(DyadicInterval(A, A, q), work))
            gb = _mid(G(DyadicInterval(B, B, q), work))
        # secant estimate
        if ga is not None and gb is not None and ga > gb and stalls < 2:
            t = A + int((B - A) * ga / (ga - gb))
            t = min(max(t, A + 1), B - 1)
        else:
            t = (A + B) >> 1
        eps = 1 << max(q - target - 1, 0)
        probes = [t - eps, t + eps] if stalls < 2 else [t]
        moved = False
        new_a, new_b = A, B
        new_ga, new_gb = ga, gb
        for x in probes:
            if not (new_a < x < new_b):
                continue
            s, mid = _probe_sign(G, x, q, work, cap)
            if s == 1:
                new_a, new_ga, moved = x, mid, True
            elif s == -1:
                new_b, new_gb, moved = x, mid, True
        if not moved:
            # the probes sit within noise of the root: shrink by bisection of the halves
            m = (A + B) >> 1
            s, mid = _probe_sign(G, m, q, work, cap)
            if s == 1:
                new_a, new_ga = m, mid
            elif s == -1:
                new_b, new_gb = m, mid
            else:
                quarter = (B - A) >> 2
                s1, m1 = _probe_sign(G, m - quarter, q, work, cap)
                s2, m2 = _probe_sign(G, m + quarter, q, work, cap)
                if s1 == 1:
                    new_a, new_ga = m - quarter, m1
                if s2 == -1:
                    new_b, new_gb = m + quarter, m2
                if s1 != 1 and s2 != -1:
                    raise PrecisionExhausted("root bracket cannot be narrowed at the cap")
            stalls += 1
        else:
            improvement = (B - A) // max(new_b - new_a, 1)
            stalls = 0 if improvement >= 4 else stalls + 1
        a, b, prec = new_a, new_b, q
        ga, gb = new_ga, new_gb


def _mid(iv: DyadicInterval):
    return iv.midpoint()


def _probe_sign(G, x: int, q: int, work: int, cap: int):
    w = work
    while True:
        iv = G(DyadicInterval(x, x, q), w)
        s = iv.certain_sign()
        if s is not None and s != 0:
            return s, iv.midpoint()
        if s == 0:
            return 0, Fraction(0)
        w *= 2
        if w > 2 * cap + 64:
            return None, iv.midpoint()


def simplify(v):
    """Rewrite an exact number in the smallest tier that holds it.

    Algebraic numbers of degree 1 or 2 become a Fraction or a QuadraticSurd.
    """
    v = as_number(v)
    if isinstance(v, FieldElement):
        r = v.rational_value()
        if r is not None:
            return r
        v = v.to_algebraic()
    if isinstance(v, QuadraticSurd):
        return QuadraticSurd.make(v.a, v.b, v.d)
    if not isinstance(v, AlgebraicNumber):
        return v
    if len(v.poly) > 64:
        return v
    m = v.minpoly()
    if len(m) == 2:
        return Fraction(-m[1], m[0])
    if len(m) == 3:
        a, b, c = m
        disc = b * b - 4 * a * c
        for sgn in (1, -1):
            cand = QuadraticSurd.make(Fraction(-b, 2 * a), Fraction(sgn, 2 * a), disc)
            if compare(cand, v) == Ordering.EQUAL:
                return cand
    return v
