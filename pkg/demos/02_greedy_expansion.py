"""
Greedy expansion
================

Expand a target x digit by digit: take digit 1 whenever the remainder lies
between the current Fibonacci weight and the current tail sum, then rescale.
The remainder identity lets every step be checked exactly.
"""
from fractions import Fraction

from fibreach import evaluate_word, greedy_expand, reconstruct_check, simulate_system, tail_sum

q = Fraction(5, 2)
x = Fraction(4, 3)
trace = greedy_expand(x, q, j=0, max_depth=24)
print("digits :", trace.digits)
print("status :", trace.status.value)
print("bound  :", float(trace.residual_bound))
print("error  :", float(abs(x - evaluate_word(trace.digits, q))))
print("defect :", reconstruct_check(trace))

# Remainders stay below the tail sum at every step
for h, r in enumerate(trace.remainders[:8]):
    print(f"h={h}  r={float(r):.6f}  S(q,h)={float(tail_sum(q, h)):.6f}")

# Feeding the reversed digits to the control system ends at the same value
xs = simulate_system(str(trace.digits)[::-1], q)
print("\ntrajectory end:", float(xs[-1]), " target:", float(x))

# When q exceeds a later threshold the bound can break
q = Fraction(17, 5)
bad = greedy_expand(Fraction(11, 20), q, j=1)
print("\nq=17/5, j=1:", bad.status.value, "after", bad.depth, "digits")
