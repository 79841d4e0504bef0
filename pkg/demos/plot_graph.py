"""Plot q_s on (0, 2] from CLI-style samples.

Run:  python demos/plot_graph.py [samples] [out.png]
Needs matplotlib; falls back to writing the CSV only.
"""
import csv
import io
import sys
from fractions import Fraction

from univoque.cli import main

samples = sys.argv[1] if len(sys.argv) > 1 else "400"
png = sys.argv[2] if len(sys.argv) > 2 else "qs_graph.png"

buf = io.StringIO()
code = main(["graph", "1/1000", "2", "--samples", samples, "--out", "-"], out=buf)
rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
print(f"{len(rows)} samples, exit code {code}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib missing; CSV is in memory only")

xs = [float(Fraction(r["x_lo"])) for r in rows]
lo = [float(Fraction(r["qs_lo"])) for r in rows]
hi = [float(Fraction(r["qs_hi"])) for r in rows]
fig, ax = plt.subplots(figsize=(7, 4))
ax.fill_between(xs, lo, hi, step="mid", alpha=0.4)
ax.plot(xs, lo, ".", ms=2)
ax.axhline(1.787231650, ls=":", lw=0.8, label="Komornik-Loreti")
ax.set_xlabel("x")
ax.set_ylabel("smallest univoque base")
ax.legend()
fig.tight_layout()
fig.savefig(png, dpi=150)
print("wrote", png)
