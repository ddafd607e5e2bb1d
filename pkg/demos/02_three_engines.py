"""
Three ways to count twin pairs
==============================
"""
import time

import numpy as np

from twinsieve import brute_twin_count, d0_via_ie, expand, twin_count
from twinsieve.residue_sieve import survivor_prefix_counts

# the inclusion-exclusion terms for basis {2, 3, 5}: 2 * 3 * 3 = 18 of them
for t in expand([2, 3, 5])[:6]:
    print(f"sign {t.sign:+d}  plain {t.plain}  twiddle {t.twiddle}  k = {t.lam} mod {t.modulus}")

ns = np.arange(1, 5001)
basis = (2, 3, 5, 7, 11)
same = np.array_equal(d0_via_ie(ns, basis), survivor_prefix_counts(5000, basis)[1:])
print("IE and sieve agree on D0 for n <= 5000:", same)

start = time.perf_counter()
bad = [n for n in range(9, 20001) if twin_count(n) != brute_twin_count(n)]
print(f"assembly vs brute force on [9, 20000]: {len(bad)} mismatches ({time.perf_counter() - start:.1f} s)")

# the pair (p^2 - 2, p^2) is counted by the sieve but is not a twin pair
for n in (23, 24, 47, 48):
    print(n, twin_count(n), brute_twin_count(n))
