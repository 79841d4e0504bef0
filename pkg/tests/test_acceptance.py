"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import csv
import os
import random
import subprocess
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracle import smallest_passing  # noqa: E402

from univoque import cascades as cs  # noqa: E402
from univoque import cli  # noqa: E402
from univoque import numeric as nm  # noqa: E402
from univoque.expansions import alpha, check_unique, evaluate  # noqa: E402
from univoque.landmarks import Q_MAX_POLY, golden, hat_q, komornik_loreti, q_max  # noqa: E402
from univoque.numeric import Ordering, QuadraticSurd, compare, enclose  # noqa: E402
from univoque.qsolve import QsOptions, TypeI, TypeII, TypeIIIBracket, qs  # noqa: E402
from univoque.words import EPSequence, reflect, s_count, s_elements, tau_word, word_plus  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent


def _report(number, title, checks):
    """Print the criterion line, then fail the test with the first failing check."""
    ok = all(c for _, c in checks)
    bad = [name for name, c in checks if not c]
    line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {title}"
    if bad:
        line += "  (failed: " + ", ".join(bad) + ")"
    try:
        capman = _report.capsys
    except AttributeError:
        capman = None
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _expose_capsys(capsys):
    _report.capsys = capsys
    yield
    _report.capsys = None


def _inside(iv, lo, hi):
    return lo <= iv.lo and iv.hi <= hi


def _near(v, target: Fraction, tol: Fraction, bits: int = 80):
    iv = enclose(v, bits)
    return target - tol <= iv.lo and iv.hi <= target + tol


def _same_ep(a, text):
    return a == EPSequence.parse(text)


# ---------------------------------------------------------------------------


def test_01_two_thirds():
    t = time.perf_counter()
    res = qs(Fraction(2, 3))
    elapsed = time.perf_counter() - t
    c = res.classification
    iv = res.enclosure(64)
    checks = [
        ("type II", isinstance(c, TypeII)),
        ("n trace", [s.n for s in res.trace] == [6, 22]),
        ("m trace", [s.m for s in res.trace] == [12, 24]),
        ("B_1", str(res.trace[0].B) == "10010"),
        ("B_2", str(res.trace[1].B) == "100100101100101100101"),
        ("width", iv.hi - iv.lo <= Fraction(1, 10**9)),
        ("value", _inside(iv, Fraction(18316120 - 500, 10**7), Fraction(18316120 + 500, 10**7))),
        ("runtime", elapsed < 2.0),
    ]
    _report(1, f"qs 2/3 trace and value ({elapsed:.2f}s)", checks)


def test_02_one_half():
    res = qs(Fraction(1, 2))
    c = res.classification
    q = c.q
    checks = [
        ("type II", isinstance(c, TypeII)),
        ("minpoly", isinstance(q, nm.AlgebraicNumber) and q.minpoly() == (1, 0, -3)),
        ("zero remainder", nm.sign_of_poly_at((1, 0, -3), q) == 0),
        ("sqrt 3", nm.simplify(q) == QuadraticSurd.sqrt(3)),
        ("expansion", _same_ep(c.expansion, "(01)^inf")),
    ]
    _report(2, "qs 1/2 is sqrt(3) with expansion (01)^inf", checks)


EXAMPLES = [
    (Fraction(72, 100), Fraction(17967, 10**4), "1001100101(1001010110100101)^inf", (5, 7, 17)),
    (Fraction(84, 100), Fraction(17557, 10**4), "1010101(0011)^inf", (3, 3, 3, 5)),
    (Fraction(39, 100), Fraction(17988, 10**4), "0100101(10010101)^inf", (7, 9)),
]


def test_03_examples():
    checks = []
    for x, target, exp, trace in EXAMPLES:
        res = qs(x)
        c = res.classification
        checks += [
            (f"{x} type", isinstance(c, TypeII)),
            (f"{x} value", _near(c.q, target, Fraction(5, 10**5))),
            (f"{x} expansion", _same_ep(c.expansion, exp)),
            (f"{x} n-trace", res.n_trace == trace),
        ]
    checks.append(("0.39 prefix zeros", qs(Fraction(39, 100)).prefix_zeros == 1))
    _report(3, "examples 0.72, 0.84, 0.39", checks)


def test_04_golden_inverse():
    x = cli.evaluate_expression("(sqrt(5)-1)/2")
    res = qs(x)
    c = res.classification
    s1, s2 = res.trace[0], res.trace[1]
    qm = q_max().value
    iv = enclose(c.q, 80)
    target = Fraction(1888453328, 10**9)
    checks = [
        ("type II", isinstance(c, TypeII)),
        ("q_1 minpoly", s1.q.minpoly() == (1, -2, 0, 1, -1)),
        ("alpha(q_1)", alpha(s1.q).detect_period() == EPSequence("", "111000")),
        ("n_1", s1.n == 4),
        ("B_1", str(s1.B) == "100"),
        ("n_2", s2.n == 14),
        ("B_2", str(s2.B) == "1000110001100"),
        ("m_2", s2.m == 17),
        ("equals qmax", nm.exact_equal(c.q, qm)),
        ("same minpoly", c.q.minpoly() == nm.AlgebraicNumber(Q_MAX_POLY, Fraction(18884533, 10**7),
                                                              Fraction(18884534, 10**7)).minpoly()),
        ("enclosure", iv.lo - Fraction(1, 10**8) <= target <= iv.hi + Fraction(1, 10**8)),
    ]
    xi = enclose(x, 80)
    for d in ("1(0010001100011)^inf", "100(1000110001100)^inf"):
        v = enclose(evaluate(d, c.q), 80)
        checks.append((f"{d} at 80 bits", not v.disjoint(xi) and v.hi - v.lo <= Fraction(1, 1 << 80)))
    _report(4, "qs (sqrt(5)-1)/2 reaches qmax", checks)


def _six_places(v, quoted: str):
    iv = enclose(v, 80)
    lo = iv.lo
    trunc = Fraction(int(lo * 10**6), 10**6)
    rounded = Fraction(round(lo * 10**6), 10**6)
    # the enclosure must not straddle a rounding or truncation boundary
    same = int(iv.hi * 10**6) == int(lo * 10**6) and round(iv.hi * 10**6) == round(lo * 10**6)
    return same and Fraction(quoted) in (trunc, rounded)


def test_05_hat_q():
    quoted = ["1.618034", "1.754877", "1.784599", "1.787207"]
    checks = [(f"hat_q({n})", _six_places(hat_q(n).value, s)) for n, s in enumerate(quoted, 1)]
    _report(5, "hat_q(1..4) to six decimal places", checks)


def test_06_set_s():
    listed = [2, 3, 4, 8, 14, 15, 16, 26, 27, 28, 32, 50, 51, 52, 56, 62, 63, 64]
    checks = [
        ("list", s_elements(64) == listed),
        ("N_1, N_2", s_count(1) == 1 and s_count(2) == 3),
        ("Lucas", all(s_count(k) == s_count(k - 1) + s_count(k - 2) for k in range(3, 21))),
        ("enumeration", all(s_count(k) == len(s_elements(1 << k)) for k in range(1, 15))),
    ]
    _report(6, "set S and its Lucas counts", checks)


def _identity_checks(m):
    q = hat_q(m + 1).value
    t = tau_word(1 << m)
    p = q ** (1 << m)
    ratio = (2 - q) / (q - 1)
    lhs1 = evaluate(t, q)
    rhs1 = 1 - ratio / p
    lhs2 = evaluate(word_plus(reflect(t)), q)
    rhs2 = ratio
    h = q ** (1 << (m - 1))
    lhs3 = evaluate(word_plus(reflect(tau_word(1 << (m - 1)))), q)
    rhs3 = ratio * (1 / (1 - 1 / h) - 1 / h)
    out = []
    for lhs, rhs in ((lhs1, rhs1), (lhs2, rhs2), (lhs3, rhs3)):
        d = enclose(lhs - rhs, 64)
        out.append(d.lo <= 0 <= d.hi and d.hi - d.lo <= Fraction(1, 1 << 64))
    return out


def _gap_ok(m):
    e = 1 << m
    W = e + 256
    Qm1 = enclose(hat_q(m + 1).value, W)
    Qm = enclose(hat_q(m).value, W)
    gap_lo = Qm1.lo - Qm.hi
    power_lo = (Qm1 ** e).lo
    return gap_lo > Fraction(265, 1000) / power_lo


def test_07_identities():
    checks = []
    for m in range(1, 9):
        for i, ok in enumerate(_identity_checks(m), 1):
            checks.append((f"identity {i} m={m}", ok))
    for m in range(1, 11):
        checks.append((f"gap m={m}", _gap_ok(m)))
    _report(7, "hat_q identities (m<=8) and gap bound (m<=10)", checks)


def test_08_type_one():
    x = cli.evaluate_expression("1/(qKL*(qKL-1))")
    res = qs(x)
    c = res.classification
    kl = enclose(komornik_loreti().value, 64)
    iv = res.enclosure(64)
    checks = [
        ("type I", isinstance(c, TypeI)),
        ("landmark", c.landmark is komornik_loreti()),
        ("identity", c.q is komornik_loreti().value),
        ("enclosure", iv.lo >= kl.lo - Fraction(1, 10**12) and iv.hi <= kl.hi + Fraction(1, 10**12)),
    ]
    _report(8, "qs 1/(qKL(qKL-1)) is type I at q_KL", checks)


def test_09_level_set():
    kl = enclose(komornik_loreti().value, 96)
    tol = Fraction(1, 10**6)
    checks = []
    for n in (2, 3, 4, 8, 14, 16):
        res = qs(cs.level_point("x_n", n).value, QsOptions(bracket_tol=tol))
        c = res.classification
        iv = res.enclosure(96)
        checks += [
            (f"x_{n} bracket", isinstance(c, TypeIIIBracket) and c.by_theorem),
            (f"x_{n} width", iv.hi - iv.lo <= tol),
            (f"x_{n} contains q_KL", iv.lo <= kl.lo and kl.hi <= iv.hi),
            (f"x_{n} steps", len(res.trace) <= 40),
        ]
    out = subprocess.run([sys.executable, "-m", "univoque", "levelset", "qkl", "--upto", "16"],
                         capture_output=True, text=True, env=_env())
    flagged = {line.split()[0] for line in out.stdout.splitlines() if "type III by theorem" in line}
    checks.append(("levelset flags", all(f"x_{n}" in flagged for n in (2, 3, 4, 8, 14, 16))
                   and not any(f"x_{n}" in flagged for n in (5, 6, 7, 9))))
    bound = komornik_loreti().value - Fraction(1, 1000)
    # x_1 = 1 itself lies in the level set, so n = 1 uses x_1' = 1/q_KL
    for n, zeros in ((1, 1), (5, 0), (6, 0), (7, 0), (9, 0)):
        try:
            w = cs.witness_base(n, zeros)
            x = cs.level_point("x_n'" if zeros else "x_n", n).value
            ok = compare(w.base, bound) == Ordering.LESS and \
                check_unique(w.expansion, w.certified_at).unique and \
                not enclose(evaluate(w.expansion, w.base), 80).disjoint(enclose(x, 80))
        except cs.PreconditionViolated:
            ok = False
        checks.append((f"witness n={n}", ok))
    _report(9, "level points of q_KL: brackets and witnesses", checks)


def _env():
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    return env


def test_10_oracle():
    rng = random.Random(20240610)
    t = time.perf_counter()
    checks = []
    step = Fraction(1, 1000)
    for _ in range(100):
        x = Fraction(rng.randint(1, 99999), 100000)
        res = qs(x)
        iv = res.enclosure(64)
        u = smallest_passing(x)
        ok = u is not None and iv.lo <= u + step and u >= iv.hi - step
        checks.append((f"x={x}", ok))
    elapsed = time.perf_counter() - t
    checks.append(("runtime", elapsed < 300))
    _report(10, f"grid oracle brackets qs on 100 rationals ({elapsed:.1f}s)", checks)


def _rationals_inside(lo, hi, count, bits=None):
    """count rationals strictly inside (lo, hi), equally spaced."""
    bits = bits or 64
    while True:
        a, b = enclose(lo, bits), enclose(hi, bits)
        if a.hi < b.lo:
            break
        bits *= 2
    L, H = a.hi, b.lo
    return [L + (H - L) * Fraction(i, count + 1) for i in range(1, count + 1)]


def test_11_cascades():
    checks = []
    for m in range(1, 7):
        q = cs.qs_closed_form(cs.xi(1, m + 1)).q
        checks.append((f"xi_{m + 1}", nm.exact_equal(q, hat_q(m + 1).value)))

    # (1, q_G]: the closed form is verified independently of itself: exact
    # uniqueness at the base, exact value, and the grid oracle
    rng = random.Random(7)
    g = enclose(golden().value, 64).lo
    samples = sorted(1 + (g - 1) * Fraction(rng.randint(1, 10**6), 10**6) for _ in range(50))
    agree = True
    for x in samples:
        cf = cs.qs_closed_form(x)
        res = qs(x)
        iv = enclose(cf.q, 64)
        u = smallest_passing(x)
        agree &= nm.exact_equal(res.q, cf.q)
        agree &= check_unique(cf.expansion, cf.q).unique
        agree &= nm.exact_equal(evaluate(cf.expansion, cf.q), x)
        agree &= u is not None and iv.lo <= u + Fraction(1, 1000) and u >= iv.hi - Fraction(1, 1000)
    checks.append(("50 samples in (1, q_G]", agree))

    # cascades below 1 where the full algorithm runs: n in S
    algo = True
    for n in (2, 4):
        k = cs._k_of(n)
        for m in range(k + 1, k + 4):
            for x in _rationals_inside(cs.xi(n, m + 1), cs.xi(n, m), 4):
                cf = cs.qs_closed_form(x, n=n)
                res = qs(x)
                a, b = enclose(cf.q, 40), res.enclosure(40)
                algo &= not a.disjoint(b) and nm.exact_equal(cf.q, res.q)
    checks.append(("closed form equals the algorithm for n=2,4", algo))

    shape = True
    slack = Fraction(1, 1 << 30)
    for m in range(1, 5):
        for j in range(1, 7):
            lo = cs.xi(1, m + 1) if j == 1 else cs.xi(1, m, j - 1)
            hi = cs.xi(1, m, j)
            xs = _rationals_inside(lo, hi, 5)
            qv = [cs.qs_closed_form(x).q for x in xs]
            for a, b in zip(qv, qv[1:]):
                shape &= compare(a, b) == Ordering.GREATER
            for i in range(len(xs) - 2):
                mid = xs[i + 1]  # equally spaced, so xs[i+1] is the midpoint of xs[i], xs[i+2]
                bound = enclose((qv[i] + qv[i + 2]) / 2, 64).hi + slack
                shape &= enclose(qv[i + 1], 64).lo <= bound
                assert mid == (xs[i] + xs[i + 2]) / 2
    checks.append(("decreasing and midpoint convex", shape))
    _report(11, "cascade closed forms", checks)


def test_12_graph():
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "graph.csv"
        t = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "univoque", "graph", "0.23", "1.9",
                               "--samples", "2000", "--out", str(path)],
                              capture_output=True, text=True, env=_env())
        elapsed = time.perf_counter() - t
        rows = list(csv.DictReader(open(path))) if path.exists() else []
    ulp = Fraction(1, 10**15)  # the CSV prints outward-rounded 15-digit decimals
    g_lo = enclose(golden().value, 64).lo - ulp
    qmax_hi = enclose(q_max().value, 64).hi + Fraction(1, 10**6)
    kl_hi = enclose(komornik_loreti().value, 64).hi + ulp
    below = above = True
    for r in rows:
        x_lo, x_hi = Fraction(r["x_lo"]), Fraction(r["x_hi"])
        lo, hi = Fraction(r["qs_lo"]), Fraction(r["qs_hi"])
        if x_hi < 1:
            below &= g_lo <= lo and hi <= qmax_hi
        elif x_lo >= 1:
            above &= lo > 1 and hi <= kl_hi
    checks = [
        ("exit code", proc.returncode == 0),
        ("rows", len(rows) == 2000),
        ("runtime", elapsed < 60),
        ("range below 1", below),
        ("range from 1", above),
    ]
    _report(12, f"graph over [0.23, 1.9], 2000 samples ({elapsed:.1f}s)", checks)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
