"""
Tail sums and thresholds
========================

The largest reachable value at offset j is the tail sum S(q, j).  The
thresholds Q(j) mark where the greedy expansion stops filling a whole
interval.  This script tabulates both and shows that Q(j) oscillates
towards 1 + sqrt(5) rather than increasing.
"""
import math
from fractions import Fraction

from fibreach import paper_q_limit, tail_sum, tail_sum_truncated, threshold_q, threshold_supremum

# Tail sums are exact for rational q
print("S(2, 0) =", tail_sum(2, 0))
print("S(3, 1) =", tail_sum(3, 1))
print("S(7/2, 5) =", tail_sum(Fraction(7, 2), 5))

# The partial sums approach the closed form; the gap is S(q, j+n) / q^n
for n in (5, 20, 60):
    gap = tail_sum(2, 0) - tail_sum_truncated(2, 0, n)
    print(f"n={n:3d}  gap={float(gap):.3e}  S(2,n)/2^n={float(tail_sum(2, n) / 2**n):.3e}")

# Thresholds
print()
for j in range(10):
    print(f"Q({j}) = {threshold_q(j):.12f}")

sup = threshold_supremum(64)
print(f"\nsupremum {sup.sup:.10f} at j={sup.argmax}, Q(64) = {sup.limit_estimate:.10f}")
print(f"1 + sqrt(5)         = {1 + math.sqrt(5):.10f}")
print(f"quoted limit        = {paper_q_limit:.10f}  (below Q(0), so inconsistent)")
