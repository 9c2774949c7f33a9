"""
Interval decomposition and the brute-force oracle
=================================================

For q in the first decomposition regime the reachable set is two disjoint
intervals.  The oracle enumerates all prefixes of a given depth and merges
their candidate intervals; it always contains the reachable set.
"""
from fractions import Fraction

from fibreach import (
    candidate_intervals,
    classify_regime,
    gap_report,
    lex_monotone_check,
    membership,
    oracle_union,
)

q = 3
report = classify_regime(q)
print(report.regime.value, "j =", report.j)

dec = candidate_intervals(q, report.j)
for word, interval in dec.candidates():
    print(word, [str(v) for v in interval])
print("disjoint:", dec.disjoint, "margins:", [str(m) for m in dec.separation_margins])

for depth in (4, 10, 20):
    outer = oracle_union(q, depth)
    print(f"depth {depth:2d}: {len(outer)} components, "
          f"Hausdorff to decomposition {dec.merged.hausdorff(outer):.2e}")

print(gap_report(dec.merged))
for x in (Fraction(1, 2), Fraction(9, 10), Fraction(3, 2)):
    verdict, cert = membership(x, q)
    print(x, verdict.value, cert.get("method"))

# Past the largest threshold every prefix gets its own component
print("\nq=4:", [len(oracle_union(4, n)) for n in range(1, 9)])
print("lexicographic order at q=4:", lex_monotone_check(4, 12).holds)
print("counterexample at q=2:", lex_monotone_check(2, 4))
