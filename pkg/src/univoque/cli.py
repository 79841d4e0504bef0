"""Command line front end: expression parsing and subcommands."""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import landmarks as lmk
from . import numeric as nm
from .expansions import alpha, check_unique, evaluate, expansion_stream, quasi_greedy_digits
from .numeric import DomainError, PrecisionExhausted, QuadraticSurd
from .words import EPSequence, in_S, s_elements, thue_morse

EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2


# ---------------------------------------------------------------------------
# expressions


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownIdentifier(ValueError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at byte {offset}")
        self.name = name
        self.offset = offset


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<str>"[01]*")
  | (?P<op>[-+*/()])
""", re.VERBOSE)


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), len(text[:pos].encode())))
        pos = m.end()
    out.append(("end", "", len(text.encode())))
    return out


@dataclass(frozen=True)
class Num:
    value: Fraction
    offset: int


@dataclass(frozen=True)
class Ident:
    name: str
    arg: object
    offset: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object
    offset: int


@dataclass(frozen=True)
class Neg:
    arg: object
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    offset: int


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_IDENTS = {"qG", "qKL", "qmax", "qhat", "dvk", "Q3"}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ExprSyntaxError(f"expected {want}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr(0)
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self, min_prec: int):
        left = self.unary()
        while True:
            tok = self.peek()
            if tok[0] != "op" or tok[1] not in _PREC or _PREC[tok[1]] < min_prec:
                return left
            self.i += 1
            right = self.expr(_PREC[tok[1]] + 1)
            left = BinOp(tok[1], left, right, tok[2])

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.i += 1
            return Neg(self.unary(), tok[2])
        if tok[0] == "op" and tok[1] == "+":
            self.i += 1
            return self.unary()
        return self.atom()

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Num(Fraction(text), off)
        if kind == "op" and text == "(":
            node = self.expr(0)
            self.take("op", ")")
            return node
        if kind == "name":
            if text == "sqrt":
                self.take("op", "(")
                arg = self.expr(0)
                self.take("op", ")")
                return Call("sqrt", arg, off)
            if text not in _IDENTS:
                raise UnknownIdentifier(text, off)
            if text == "qhat":
                self.take("op", "(")
                n = self.take("num")
                if not n[1].isdigit():
                    raise ExprSyntaxError("qhat needs an integer index", n[2])
                self.take("op", ")")
                return Ident(text, int(n[1]), off)
            if text == "dvk":
                self.take("op", "(")
                w = self.take("str")
                self.take("op", ")")
                return Ident(text, w[1].strip('"'), off)
            return Ident(text, None, off)
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", off)


def parse(text: str):
    """Parse an input expression into a small syntax tree."""
    return _Parser(text).parse()


# Rational functions of one transcendental landmark are kept symbolically so
# that values like 1/(c*(c-1)) can be recognized as expansions evaluated at c.

@dataclass(frozen=True)
class _RatFn:
    gen: object
    num: tuple  # highest degree first, Fraction coefficients
    den: tuple

    def _pair(self, other):
        if isinstance(other, _RatFn):
            return other if other.gen is self.gen else None
        if isinstance(other, Fraction):
            return _RatFn(self.gen, (other,), (Fraction(1),))
        return None

    def combine(self, op: str, other, swap: bool = False):
        o = self._pair(other)
        if o is None:
            return None
        a, b = (o, self) if swap else (self, o)
        if op in "+-":
            s = 1 if op == "+" else -1
            num = nm.poly_add(nm.poly_mul(a.num, b.den), nm.poly_scale(nm.poly_mul(b.num, a.den), s))
            den = nm.poly_mul(a.den, b.den)
        elif op == "*":
            num, den = nm.poly_mul(a.num, b.num), nm.poly_mul(a.den, b.den)
        else:
            if not any(b.num):
                raise ZeroDivisionError("division by zero")
            num, den = nm.poly_mul(a.num, b.den), nm.poly_mul(a.den, b.num)
        return _RatFn(self.gen, tuple(_trim(num)), tuple(_trim(den)))

    def value(self):
        k = _zeros_ones_form(self.num, self.den)
        if k is not None:
            return evaluate(EPSequence("0" * k, "1"), self.gen)
        if len(self.num) == 2 and self.num[1] == 0 and self.den == (self.num[0],):
            return self.gen
        num, den = self.num, self.den

        def fn(Q):
            work = Q.prec + 16 + 4 * (len(num) + len(den))
            return _poly_iv(num, Q, work) / _poly_iv(den, Q, work)

        return nm.lift(fn, [self.gen], name="expression")


def _trim(p):
    p = [Fraction(c) for c in p]
    while len(p) > 1 and p[0] == 0:
        p.pop(0)
    return p


def _poly_iv(p, Q, work):
    acc = nm.DyadicInterval.around(Fraction(0), work)
    for c in p:
        acc = acc * Q + nm.DyadicInterval.around(Fraction(c), work)
    return acc


def _zeros_ones_form(num, den):
    """k when num/den equals 1/(c^k (c-1)) as a rational function, else None."""
    if len(num) != 1 or num[0] == 0:
        return None
    d = [c / num[0] for c in den]
    k = len(d) - 2
    if k < 0:
        return None
    target = [Fraction(1), Fraction(-1)] + [Fraction(0)] * k
    return k if d == target else None


def _landmark_value(node: Ident):
    if node.name == "qhat":
        if node.arg < 1 or node.arg > lmk.HAT_Q_MAX_N:
            raise DomainError(f"qhat index must lie in 1..{lmk.HAT_Q_MAX_N}")
        return lmk.hat_q(node.arg).value
    if node.name == "dvk":
        try:
            return lmk.de_vries_komornik(node.arg).value
        except lmk.NotAdmissible as e:
            raise DomainError(str(e))
    return lmk.get(node.name).value


def _is_transcendental(v) -> bool:
    tag = getattr(v, "tag", None)
    return bool(tag) and tag[0] == "landmark"


def _finish(v):
    return v.value() if isinstance(v, _RatFn) else v


def _arith(op, a, b):
    if isinstance(a, _RatFn):
        r = a.combine(op, b)
        if r is not None:
            return r
    if isinstance(b, _RatFn):
        r = b.combine(op, a, swap=True)
        if r is not None:
            return r
    a, b = _finish(a), _finish(b)
    if op == "/" and nm.compare(b, 0) == nm.Ordering.EQUAL:
        raise ZeroDivisionError("division by zero")
    try:
        return nm._OPS[op](a, b)
    except (TypeError, ValueError, ArithmeticError):
        return nm._generic_binop(op, a, b)


def _eval(node):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Ident):
        v = _landmark_value(node)
        if _is_transcendental(v):
            return _RatFn(v, (Fraction(1), Fraction(0)), (Fraction(1),))
        return v
    if isinstance(node, Neg):
        v = _eval(node.arg)
        return _arith("*", v, Fraction(-1))
    if isinstance(node, Call):
        v = _finish(_eval(node.arg))
        if not isinstance(v, Fraction) or v <= 0:
            raise DomainError(f"sqrt needs a positive rational argument (byte {node.offset})")
        return QuadraticSurd.sqrt(v)
    if isinstance(node, BinOp):
        return _arith(node.op, _eval(node.left), _eval(node.right))
    raise TypeError(node)


def evaluate_expression(text: str):
    """Parse and evaluate an input expression to a Number."""
    v = _finish(_eval(parse(text)))
    if isinstance(v, int):
        v = Fraction(v)
    return v


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v, digits: int = 20) -> str:
    v = nm.as_number(v)
    iv = nm.enclose(v, int(digits * 3.33) + 8)
    s = nm.simplify(v) if nm.is_exact(v) else v
    enc = nm.format_interval(iv, digits)
    if isinstance(s, Fraction):
        return f"{s} (exact)"
    if isinstance(s, QuadraticSurd):
        return f"{s} (exact) {enc}"
    if isinstance(s, nm.AlgebraicNumber) and len(s.poly) <= 65:
        return f"{enc}, root of {nm.format_poly(s.minpoly())}"
    return enc


def _print_qs(res, trace: bool, out):
    c = res.classification
    print(f"x = {_fmt(res.x)}", file=out)
    print(f"classification: {c.label}", file=out)
    if res.q is not None:
        print(f"q_s = {_fmt(res.q)}", file=out)
    else:
        lo, hi = res.bracket()
        print(f"q_s in [{nm.format_interval(nm.enclose(lo, 80), 20)}, "
              f"{nm.format_interval(nm.enclose(hi, 80), 20)}]", file=out)
    if hasattr(c, "expansion"):
        print(f"expansion {c.expansion}", file=out)
    if getattr(c, "landmark", None) is not None:
        print(f"landmark {c.landmark.name}", file=out)
    if getattr(c, "by_theorem", False):
        print("type III by theorem: x is a level point of q_KL", file=out)
    if getattr(c, "reason", None):
        print(f"reason: {c.reason}", file=out)
    if getattr(c, "provenance", None):
        print(f"provenance: {c.provenance}", file=out)
    if res.prefix_zeros:
        print(f"prefix zeros: {res.prefix_zeros}", file=out)
    if any(n is not None for n in res.n_trace):
        print(f"n-trace {res.n_trace}", file=out)
    if trace:
        for s in res.trace:
            print(f"  {s}", file=out)
    for d in res.diagnostics:
        print(f"note: {d}", file=out)


# ---------------------------------------------------------------------------
# subcommands


def cmd_qs(args, out):
    from .qsolve import QsOptions, qs

    x = evaluate_expression(args.expr)
    res = qs(x, QsOptions(max_steps=args.max_steps, precision_cap=args.precision))
    if args.json:
        print(json.dumps(res.to_json(), indent=2), file=out)
    else:
        _print_qs(res, args.trace, out)
    return EXIT_UNDETERMINED if res.label == "undetermined" else EXIT_OK


def cmd_alpha(args, out):
    q = evaluate_expression(args.base)
    a = alpha(q)
    print(a.prefix(args.n), file=out)
    return EXIT_OK


def cmd_expand(args, out):
    x, q = evaluate_expression(args.x), evaluate_expression(args.q)
    print(quasi_greedy_digits(x, q, args.n).bits, file=out)
    return EXIT_OK


def cmd_unique(args, out):
    x, q = evaluate_expression(args.x), evaluate_expression(args.q)
    s = expansion_stream(x, q)
    d = s.as_ep() if s.as_ep() is not None else s
    v = check_unique(d, q, depth=args.n)
    print(f"quasi-greedy expansion {s.prefix(min(args.n, 64))}...", file=out)
    print(str(v), file=out)
    return EXIT_OK


def cmd_landmark(args, out):
    try:
        lm = lmk.get(args.name)
    except KeyError as e:
        raise DomainError(str(e.args[0]))
    if args.json:
        print(json.dumps(lm.to_json(80), indent=2), file=out)
    else:
        print(lmk.describe(lm, 80), file=out)
    return EXIT_OK


def cmd_sset(args, out):
    print(" ".join(str(n) for n in s_elements(args.upto)), file=out)
    return EXIT_OK


def cmd_cascade(args, out):
    from . import cascades as cs

    ctx = cs.CascadeContext(args.n, args.m, args.j)
    print(f"n={args.n} k={ctx.k} m={args.m}", file=out)
    print(f"qhat({args.m})   = {_fmt(lmk.hat_q(args.m).value)}", file=out)
    print(f"qhat({args.m + 1})   = {_fmt(lmk.hat_q(args.m + 1).value)}", file=out)
    print(f"xi_{args.m}      = {_fmt(cs.xi(args.n, args.m))}", file=out)
    print(f"xi_{args.m + 1}      = {_fmt(cs.xi(args.n, args.m + 1))}", file=out)
    print(f"c_inf     = {cs.CascadeContext(args.n, args.m).sequence()}", file=out)
    if args.j is not None:
        print(f"xi_({args.m},{args.j})  = {_fmt(cs.xi(args.n, args.m, args.j))}", file=out)
        print(f"c_{args.j}       = {ctx.sequence()}", file=out)
    return EXIT_OK


def _sample(x: Fraction):
    from .qsolve import QsOptions, qs

    res = qs(x, QsOptions())
    iv = res.enclosure(64)
    c = res.classification
    region = c.label
    prov = getattr(c, "provenance", "") or ""
    if prov.startswith("closed form, "):
        region = prov[len("closed form, "):]
    elif res.x == 1:
        region = "x=1"
    return iv.lo, iv.hi, region


def _dec_down(v: Fraction, d: int = 15) -> str:
    s = 10 ** d
    return _dec(Fraction((v.numerator * s) // v.denominator, s), d)


def _dec_up(v: Fraction, d: int = 15) -> str:
    s = 10 ** d
    return _dec(Fraction(-((-v.numerator * s) // v.denominator), s), d)


def _dec(v: Fraction, d: int) -> str:
    sign = "-" if v < 0 else ""
    n = abs(v.numerator) * 10 ** d // v.denominator
    return f"{sign}{n // 10 ** d}.{n % 10 ** d:0{d}d}"


def graph_rows(a: Fraction, b: Fraction, samples: int, jobs: int = 1):
    """Rows (x, qs_lo, qs_hi, region) at equally spaced exact rationals."""
    if samples < 2:
        raise DomainError("need at least two samples")
    xs = [a + (b - a) * i / (samples - 1) for i in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_sample, xs, chunksize=16))
    else:
        results = [_sample(x) for x in xs]
    return [(x,) + r for x, r in zip(xs, results)]


def cmd_graph(args, out):
    a, b = evaluate_expression(args.a), evaluate_expression(args.b)
    if not (isinstance(a, Fraction) and isinstance(b, Fraction)) or not 0 < a < b:
        raise DomainError("graph endpoints must be rationals with 0 < a < b")
    rows = graph_rows(a, b, args.samples, args.jobs)
    fh = open(args.out, "w", newline="") if args.out != "-" else out
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x_lo", "x_hi", "qs_lo", "qs_hi", "region"])
        for x, lo, hi, region in rows:
            w.writerow([_dec_down(x), _dec_up(x), _dec_down(lo), _dec_up(hi), region])
    finally:
        if fh is not out:
            fh.close()
    bad = sum(1 for r in rows if r[3] == "undetermined")
    if args.out != "-":
        print(f"wrote {len(rows)} samples to {args.out}" + (f", {bad} undetermined" if bad else ""),
              file=out)
    return EXIT_UNDETERMINED if bad else EXIT_OK


def cmd_levelset(args, out):
    from . import cascades as cs

    if args.level.lower() != "qkl":
        raise DomainError("only the level set of qKL is supported")
    print(f"{'point':<10}{'value':<44}{'in L(qKL)':<11}note", file=out)
    for n in range(1, args.upto + 1):
        kinds = ["x_n"]
        if thue_morse(n) == 1:
            kinds.append("x_n'")
        kinds.append("x_n''")
        for kind in kinds:
            lp = cs.level_point(kind, n)
            iv = nm.enclose(lp.value, 80)
            name = kind.replace("_n", f"_{n}")
            note = "type III by theorem" if lp.in_level else ""
            print(f"{name:<10}{nm.format_interval(iv, 18):<44}{str(lp.in_level).lower():<11}{note}",
                  file=out)
    for n in (k for k in range(2, args.upto + 1) if in_S(k)):
        lp = cs.level_point("x_n*", n)
        iv = nm.enclose(lp.value, 80)
        print(f"{'x_' + str(n) + '*':<10}{nm.format_interval(iv, 18):<44}{'true':<11}"
              "accumulation point, type I", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="univoque", description="Smallest univoque bases of real numbers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("qs", help="compute q_s(x)")
    s.add_argument("expr")
    s.add_argument("--precision", type=int, default=None, help="precision cap in bits")
    s.add_argument("--max-steps", type=int, default=64)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_qs)

    s = sub.add_parser("alpha", help="quasi-greedy expansion of 1")
    s.add_argument("base")
    s.add_argument("-n", type=int, default=32)
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("expand", help="quasi-greedy expansion of x")
    s.add_argument("x")
    s.add_argument("q")
    s.add_argument("-n", type=int, default=32)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("unique", help="is the expansion of x in base q unique")
    s.add_argument("x")
    s.add_argument("q")
    s.add_argument("-n", type=int, default=1024)
    s.set_defaults(func=cmd_unique)

    s = sub.add_parser("landmark", help="catalog entry")
    s.add_argument("name")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_landmark)

    s = sub.add_parser("sset", help="list the set S")
    s.add_argument("--upto", type=int, default=64)
    s.set_defaults(func=cmd_sset)

    s = sub.add_parser("cascade", help="cascade boundaries and closed forms")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--j", type=int, default=None)
    s.set_defaults(func=cmd_cascade)

    s = sub.add_parser("graph", help="CSV samples of q_s on [a, b]")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--out", default="-")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("levelset", help="level points of q_KL")
    s.add_argument("level")
    s.add_argument("--upto", type=int, default=16)
    s.set_defaults(func=cmd_levelset)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ExprSyntaxError, UnknownIdentifier, DomainError, ZeroDivisionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except PrecisionExhausted as e:
        print(f"undetermined: {e}", file=sys.stderr)
        return EXIT_UNDETERMINED


if __name__ == "__main__":
    sys.exit(main())
