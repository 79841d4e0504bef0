"""Points where q_s equals the Komornik-Loreti constant.

Prints the staircase points, their companions, and the accumulation points,
each with how its level membership is certified.

Run:  python demos/level_set.py [upto]
"""
import sys

from univoque import cascades as cs
from univoque.numeric import enclose
from univoque.words import in_S

upto = int(sys.argv[1]) if len(sys.argv) > 1 else 12

for n in range(1, upto + 1):
    for kind in ("x_n", "x_n'", "x_n''"):
        try:
            p = cs.level_point(kind, n)
        except (ValueError, cs.PreconditionViolated):
            continue
        iv = enclose(p.value, 50)
        how = "; ".join(p.notes) if p.notes else ""
        print(f"{kind:6} n={n:<3} S={int(in_S(n))} {float(iv.lo):.12f}  in_level={p.in_level}  {how}")
print()

for n in (n for n in range(1, upto + 1) if in_S(n)):
    p = cs.level_point("x_n*", n)
    print(f"x_n*   n={n:<3} {float(enclose(p.value, 50).lo):.12f}  in_level={p.in_level}")
