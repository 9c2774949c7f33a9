"""
Regime scan
===========

Count the components of the depth-14 outer approximation across a grid of q
and mark the thresholds.  The count jumps from 1 to 2 at Q(0) and reaches
2**14 past the largest threshold Q(1).  Saves ``regime_scan.png`` when
matplotlib is available.
"""
import numpy as np

from fibreach import classify_regime, golden_mean, oracle_union, threshold_q

qs = np.linspace(golden_mean() + 0.02, 4.0, 150)
counts = [len(oracle_union(float(q), 14)) for q in qs]

for q, c in list(zip(qs, counts))[::15]:
    print(f"q={q:.4f}  components={c:6d}  {classify_regime(float(q)).regime.value}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(7, 3.5))
ax.semilogy(qs, counts, ".-")
for j in range(4):
    ax.axvline(threshold_q(j), color="grey", lw=0.8, ls="--")
    ax.text(threshold_q(j), 1.2, f"Q({j})", rotation=90, va="bottom", fontsize=8)
ax.set_xlabel("q")
ax.set_ylabel("components at depth 14")
fig.tight_layout()
fig.savefig("regime_scan.png", dpi=120)
print("wrote regime_scan.png")
