"""Cascade boundaries on (1, golden) and the closed form inside one region.

Run:  python demos/cascade_boundaries.py
"""
from fractions import Fraction

from univoque import cascades as cs, qs
from univoque.numeric import enclose


def f(v, bits=60):
    iv = enclose(v, bits)
    return f"{float(iv.lo):.12f}"


print("n = 1 boundaries xi(1, m, j), j = 1..4")
for m in range(1, 5):
    row = [f(cs.xi(1, m, j)) for j in range(1, 5)]
    print(f"  m={m}: " + "  ".join(row) + f"  -> limit {f(cs.xi(1, m))}")
print()

for x in (Fraction(11, 10), Fraction(3, 2), Fraction(8, 5)):
    cf = cs.qs_closed_form(x)
    print(f"x = {x}: region {cf.region}, q_s ~ {f(cf.q)}, expansion {cf.expansion}")
    assert qs(x).enclosure(40).lo <= enclose(cf.q, 40).hi
print()

for n in (2, 4):
    k = cs._k_of(n)
    m = k + 1
    lo, hi = enclose(cs.xi(n, m + 1), 60), enclose(cs.xi(n, m), 60)
    x = (lo.hi + hi.lo) / 2
    a, b = cs.qs_closed_form(x, n=n), qs(x)
    print(f"n={n}: x in ({float(lo.lo):.6f}, {float(hi.hi):.6f})")
    print(f"  closed form {f(a.q)}  algorithm {f(b.q)}  region {a.region}")
