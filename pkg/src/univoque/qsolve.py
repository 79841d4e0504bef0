"""The smallest univoque base q_s(x) for x in (0, 1), by block iteration.

Each step k has a lower base q_k and an upper base r_k with q_k <= q_s <= r_k.
From alpha(q_k) we read a block B_k; r_k makes the block periodic and q_{k+1}
continues it with 0 1^inf.  The run stops when

* q_k lies in the closure of the univoque set (type I),
* the first m_k digits of alpha agree at q_k and r_k (type II, q_s = r_k),

and otherwise reports the bracket reached after ``max_steps`` (type III is
never certified from the run alone).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import numeric as nm
from .expansions import alpha, check_unique, membership, solve_base
from .landmarks import Landmark, catalog_match
from .numeric import (
    DomainError,
    NoRootInBracket,
    Ordering,
    PrecisionExhausted,
    QuadraticSurd,
    compare,
    enclose,
    is_exact,
)
from .words import EPSequence, as_ep, lex_compare, reflect, shift


class ComparisonUndecided(ArithmeticError):
    """A reflected tail agreed with alpha to the depth cap."""


@dataclass(frozen=True)
class NotFound:
    cap: int

    def __str__(self):
        return f"not found up to {self.cap}"


@dataclass(frozen=True)
class Infinite:
    """m_k = infinity; ``cap`` is None when this is proven, else the search cap."""
    cap: int | None = None

    def __str__(self):
        return "inf" if self.cap is None else f"inf (to {self.cap})"


@dataclass
class QsOptions:
    max_steps: int = 64
    n_cap: int = 10_000
    m_cap: int = 10_000
    depth_cap: int = 10_000
    precision_cap: int | None = None
    bracket_tol: Fraction | None = None  # stop once r_k - q_k is certified below this
    on_step: object = None  # callback(StepRecord), for streaming traces


@dataclass
class StepRecord:
    k: int
    q: object
    n: object
    m: object
    B: str | None
    r: object
    alpha_q: str = ""

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "q_k": number_json(self.q),
            "n_k": self.n if isinstance(self.n, int) else str(self.n),
            "m_k": self.m if isinstance(self.m, int) else str(self.m),
            "B_k": self.B,
            "r_k": number_json(self.r) if self.r is not None else None,
        }

    def __str__(self):
        q = nm.format_interval(enclose(self.q, 64), 12)
        r = nm.format_interval(enclose(self.r, 64), 12) if self.r is not None else "-"
        return f"step {self.k}: q_k={q} n_k={self.n} m_k={self.m} B_k={self.B} r_k={r}"


@dataclass
class TypeI:
    q: object
    landmark: Landmark | None
    step: int
    provenance: str = "algorithm"
    label = "type-I"


@dataclass
class TypeII:
    q: object
    expansion: EPSequence
    step: int
    provenance: str = "algorithm"
    label = "type-II"


@dataclass
class TypeIIIBracket:
    lo: object
    hi: object
    steps: int
    by_theorem: bool = False
    label = "type-III-bracket"


@dataclass
class Undetermined:
    lo: object
    hi: object
    reason: str
    label = "undetermined"


@dataclass
class QsResult:
    x: object
    classification: object
    prefix_zeros: int = 0
    trace: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.classification.label

    @property
    def q(self):
        """The certified value of q_s, or None when only a bracket is known."""
        c = self.classification
        return getattr(c, "q", None)

    def bracket(self):
        c = self.classification
        if hasattr(c, "lo"):
            return c.lo, c.hi
        return c.q, c.q

    def enclosure(self, bits: int = 64) -> nm.DyadicInterval:
        lo, hi = self.bracket()
        if lo is hi:
            return enclose(lo, bits)
        return enclose(lo, bits).hull(enclose(hi, bits))

    @property
    def n_trace(self) -> tuple:
        return tuple(s.n for s in self.trace)

    def to_json(self) -> dict:
        c = self.classification
        out = {"x": number_json(self.x), "classification": c.label,
               "prefix_zeros": self.prefix_zeros}
        if isinstance(c, (TypeI, TypeII)):
            out["q_s"] = number_json(c.q)
            out["step"] = c.step
            out["provenance"] = c.provenance
        if isinstance(c, TypeI):
            out["landmark"] = c.landmark.name if c.landmark else None
        if isinstance(c, TypeII):
            out["expansion"] = str(c.expansion)
        if isinstance(c, (TypeIIIBracket, Undetermined)):
            out["bracket"] = {"lo": number_json(c.lo), "hi": number_json(c.hi)}
        if isinstance(c, TypeIIIBracket):
            out["by_theorem"] = c.by_theorem
        if isinstance(c, Undetermined):
            out["reason"] = c.reason
        out["trace"] = [s.to_json() for s in self.trace]
        out["diagnostics"] = self.diagnostics
        return out


def number_json(v, bits: int = 64) -> dict:
    v = nm.as_number(v)
    iv = enclose(v, bits)
    out = {"enclosure": nm.format_interval(iv, 20), "lo": str(iv.lo), "hi": str(iv.hi)}
    s = nm.simplify(v) if is_exact(v) else v
    if isinstance(s, (Fraction, QuadraticSurd)):
        out["exact"] = str(s)
    elif isinstance(s, nm.AlgebraicNumber) and len(s.poly) <= 65:
        out["minpoly"] = nm.format_poly(s.minpoly())
    elif isinstance(s, nm.AlgebraicNumber):
        out["poly"] = nm.format_poly(s.poly)
    else:
        out["tier"] = "refinable"
    return out


# ---------------------------------------------------------------------------
# the lower bound


def _golden_inverse_power(k: int) -> QuadraticSurd:
    return QuadraticSurd(Fraction(-1, 2), Fraction(1, 2), 5) ** k  # (q_G - 1)^k = q_G^-k


def q_star(x):
    """(k, q) with q_G^-k <= x < q_G^-(k-1) and q^k (q - 1) = 1/x, q in (1, 2)."""
    x = nm.as_number(x)
    if compare(x, 0) != Ordering.GREATER or compare(x, 1) != Ordering.LESS:
        raise DomainError("q_star needs 0 < x < 1")
    k = 1
    while True:
        c = compare(x, _golden_inverse_power(k))
        if c == Ordering.UNDECIDED:
            raise PrecisionExhausted("x sits at a golden-ratio power boundary")
        if c != Ordering.LESS:
            break
        k += 1
    q = solve_base(EPSequence("0" * k, "1"), x, name=f"q_1 (k={k})")
    return k, q


# ---------------------------------------------------------------------------
# block indices


def find_n(a, n_cap: int = 10_000, depth_cap: int = 10_000):
    """Least n with reflect(a_n a_{n+1} ...) >= a, or NotFound(n_cap)."""
    ep = as_ep(a)
    for n in range(1, n_cap + 1):
        if ep is not None:
            r = lex_compare(ep.shift(n - 1).reflect(), ep)
            if r.greater or r.equal:
                return n
            continue
        r = lex_compare(reflect(shift(a, n - 1)), a, depth_cap)
        if r.greater:
            return n
        if r.kind == "equal_to_depth":
            raise ComparisonUndecided(f"reflected tail at n={n} equals alpha to depth {depth_cap}")
    return NotFound(n_cap)


def find_m(a, n: int, m_cap: int = 10_000):
    """Least m > n with reflect(a_n..a_m) > a_1..a_{m-n+1}, or Infinite.

    The comparison of equal-length words is decided by the first difference
    of reflect(a_n a_{n+1} ...) and a, so m = n + i - 1 where i is that index.
    """
    ep = as_ep(a)
    if ep is not None:
        r = lex_compare(ep.shift(n - 1).reflect(), ep)
    else:
        r = lex_compare(reflect(shift(a, n - 1)), a, max(m_cap - n + 1, 1))
    if r.greater and n + r.index - 1 > n:
        m = n + r.index - 1
        return m if m <= m_cap else Infinite(m_cap)
    if r.kind == "equal_to_depth":
        return Infinite(m_cap)
    return Infinite()


# ---------------------------------------------------------------------------
# the iteration


def _closure_landmark(q):
    lm = catalog_match(q)
    if lm and lm.in_U_closure:
        return lm, "landmark identity"
    if is_exact(q):
        a = alpha(q)
        if a.detect_period(search=256) is not None and membership(q, "U_closure").exact_true:
            return None, "periodic alpha satisfies the closure conditions"
    return None, None


def _width_below(lo, hi, tol) -> bool:
    bits = max(32, (1 / tol).__ceil__().bit_length() + 8)
    return enclose(hi, bits).hi - enclose(lo, bits).lo < tol


def qs(x, opts: QsOptions | None = None) -> QsResult:
    """Compute q_s(x) with its classification and step trace."""
    opts = opts or QsOptions()
    x = nm.as_number(x)
    with nm.precision_limit(opts.precision_cap):
        c1 = compare(x, 0)
        if c1 != Ordering.GREATER:
            raise DomainError("x must be positive")
        c2 = compare(x, 1)
        if c2 == Ordering.UNDECIDED:
            return QsResult(x, Undetermined(Fraction(1), Fraction(2), "x is undecidably close to 1"))
        if c2 != Ordering.LESS:
            from .cascades import qs_at_least_one

            return qs_at_least_one(x)
        return _run(x, opts)


def _run(x, opts: QsOptions) -> QsResult:
    try:
        k0, q = q_star(x)
    except PrecisionExhausted as e:
        return QsResult(x, Undetermined(Fraction(1), Fraction(2), str(e)))
    head = "0" * (k0 - 1)
    res = QsResult(x, None, prefix_zeros=k0 - 1)
    blocks: list[str] = []
    r_prev = None
    by_theorem = _is_type_three_point(x)
    for k in range(1, opts.max_steps + 1):
        upper = r_prev if r_prev is not None else Fraction(2)
        try:
            lm, why = _closure_landmark(q)
            if why:
                res.trace.append(StepRecord(k, q, None, None, None, None))
                res.classification = TypeI(q, lm, k, provenance=why)
                return res
            a = alpha(q)
            if is_exact(q):
                a.detect_period(search=256)
            n = find_n(a, opts.n_cap, opts.depth_cap)
            if isinstance(n, NotFound):
                res.classification = Undetermined(q, upper, f"n_{k} not found up to {opts.n_cap}")
                return res
            m = find_m(a, n, opts.m_cap)
            B = "1" + reflect(a.prefix(n - 2))
            r = solve_base(EPSequence(head + "".join(blocks), B), x, bracket=(q, upper),
                           name=f"r_{k}")
            step = StepRecord(k, q, n, m, B, r, alpha_q=a.prefix(max(n, m if isinstance(m, int) else 0)))
            res.trace.append(step)
            if opts.on_step:
                opts.on_step(step)
            if isinstance(m, int) and a.prefix(m) == alpha(r).prefix(m):
                exp = EPSequence(head + "".join(blocks), B)
                res.classification = TypeII(r, exp, k)
                _note_n_trace(res)
                return res
            blocks.append(B)
            if opts.bracket_tol is not None and _width_below(q, r, opts.bracket_tol):
                res.classification = TypeIIIBracket(q, r, k, by_theorem)
                _note_n_trace(res)
                return res
            q_next = solve_base(EPSequence(head + "".join(blocks) + "0", "1"), x, bracket=(q, r),
                                name=f"q_{k + 1}")
            q, r_prev = q_next, r
        except (PrecisionExhausted, ComparisonUndecided, NoRootInBracket) as e:
            res.classification = Undetermined(q, upper, f"step {k}: {e}")
            return res
    res.classification = TypeIIIBracket(q, r_prev, opts.max_steps, by_theorem)
    _note_n_trace(res)
    return res


def _note_n_trace(res: QsResult) -> None:
    ns = [s.n for s in res.trace if isinstance(s.n, int)]
    if any(b < a for a, b in zip(ns, ns[1:])):
        res.diagnostics.append(f"n-trace is not nondecreasing: {ns}")


def _is_type_three_point(x) -> bool:
    tag = getattr(x, "tag", None)
    return bool(tag) and tag[0] == "level" and bool(tag[-1])


def classify(x, opts: QsOptions | None = None):
    return qs(x, opts).classification


def check_result(res: QsResult) -> bool:
    """Recheck a type-II result: the expansion is unique at q_s and evaluates to x."""
    c = res.classification
    if not isinstance(c, TypeII):
        return False
    from .expansions import evaluate

    if not check_unique(c.expansion, c.q).unique:
        return False
    v = evaluate(c.expansion, c.q)
    if is_exact(v) and is_exact(res.x):
        return nm.exact_equal(v, res.x)
    return not enclose(v, 80).disjoint(enclose(res.x, 80))


def dumps(res: QsResult) -> str:
    return json.dumps(res.to_json(), indent=2)
