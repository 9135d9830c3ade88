"""
Chern classes of lens spaces and base-p digits
==============================================

Walks through the topological input: the truncated total Chern class,
the digit sets I and I_half, and the digit-sum threshold.
"""

from fillcert import charclass

# (1+u)^n (1-ku) with u^n = 0.  Over Z first, then mod 2.
print("n=5, k=2 over Z:  ", charclass.truncated_total_chern(5, 2).coeffs)
print("n=5, k=2 mod 2:   ", charclass.truncated_total_chern(5, 2, 2).coeffs)

# Mod 2 the class collapses to 1 exactly at powers of two
trivial = [n for n in range(2, 70) if charclass.truncated_total_chern(n, 2, 2).is_one()]
print("trivial mod 2 for n in", trivial)

# For odd p the nonzero classes are the digit-dominated indices.
ds = charclass.digit_sets(53, 3)
print("53 in base 3 (low digit first):", charclass.padic_digits(53, 3).digits)
print(f"|I| = {ds.card_I}, exact formula gives {ds.exact_count_formula}, "
      f"weaker bound gives {ds.paper_lower_bound} (flagged: {ds.discrepancy})")
print("first few of I_half:", sorted(ds.I_half)[:8])

# The digit-sum threshold is 3p-3 (or p+3 in the improved mode)
first = next(n for n in range(2, 1000) if charclass.digit_sum_criterion(n, 3))
print("smallest n meeting the p=3 threshold:", first)
