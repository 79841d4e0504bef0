"""Walk through q_s for a few hand-checkable inputs.

Run:  python demos/worked_examples.py
"""
from fractions import Fraction

from univoque import golden, qs
from univoque.numeric import QuadraticSurd, enclose


def show(label, x):
    res = qs(x)
    iv = res.enclosure(60)
    print(f"{label}")
    print(f"  classification  {res.label}")
    print(f"  q_s in          [{float(iv.lo):.15f}, {float(iv.hi):.15f}]")
    c = res.classification
    if hasattr(c, "expansion"):
        print(f"  expansion       {c.expansion}")
    for s in res.trace:
        print(f"  step {s.k}: n={s.n} m={s.m} block={s.B}")
    print()


show("x = 2/3", Fraction(2, 3))
show("x = 1/2  (answer is sqrt 3 with expansion (01)^inf)", Fraction(1, 2))

# 1/phi has a finite greedy expansion in the golden base, so that base is not
# univoque for it and the search has to move strictly above.
g = golden()
show("x = 1/golden", QuadraticSurd(Fraction(-1, 2), Fraction(1, 2), 5))
print("golden ratio", enclose(g.value, 40))
