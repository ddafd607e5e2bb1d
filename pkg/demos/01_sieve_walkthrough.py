"""
The twin sieve on n = 41
========================

Delete every k <= 41 that shares a basis prime with k or with k + 2, then
assemble the twin-pair count from what is left.
"""
from twinsieve import basis_for, brute_twin_count, d1_correction, survivors, twin_count
from twinsieve.residue_sieve import d_sqrt, deletion_trace, zeros_first_order

n = 41
basis = basis_for(n).primes
print("basis primes <= sqrt(n):", basis)

# residue-0 deletions first, then k = p - 2 (mod p)
for step in deletion_trace(range(1, n + 1), zeros_first_order(basis)):
    print(f"k mod {step.prime} != {step.residue}: {len(step.remaining):2d} left {list(step.remaining)}")

report = survivors(n, basis)
print("survivors:", report.survivors, "D0 =", report.d0)

# survivors are twin-firsts above sqrt(n); add the ones below, drop a fake pair if any
print("D(sqrt n) =", d_sqrt(n), " D1 =", d1_correction(n))
print("D(41) =", twin_count(n), " brute force:", brute_twin_count(n))
