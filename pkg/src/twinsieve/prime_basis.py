"""Prime generation, a trial-division primality oracle and the Legendre
prime-counting formula.

Primes carry 1-based indexing throughout the package: ``p(1) == 2``,
``p(2) == 3`` and so on.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterator, Sequence

import numpy as np

# odd numbers per segment; 2**18 bytes keeps the working mask in L2
SEGMENT_ODDS = 1 << 18
# below this limit the plain sieve is used
SEGMENT_THRESHOLD = 1 << 21


@dataclass(frozen=True)
class PrimeList:
    """Ascending primes up to and including ``limit``."""

    primes: tuple[int, ...]
    limit: int

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def p(self, i: int) -> int:
        """The i-th prime, 1-based."""
        if i < 1:
            raise IndexError("prime indices start at 1")
        return self.primes[i - 1]

    @property
    def v(self) -> int:
        """Index of the largest prime held (0 when empty)."""
        return len(self.primes)


def simple_sieve(limit: int) -> np.ndarray:
    """Boolean primality mask of length ``limit + 1`` (unsegmented)."""
    mask = np.ones(max(limit + 1, 2), dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask[: limit + 1]


def _segmented_primes(limit: int) -> np.ndarray:
    base = np.flatnonzero(simple_sieve(isqrt(limit)))
    odd_base = base[base > 2]
    chunks = [np.array([2], dtype=np.int64)]
    low = 3
    while low <= limit:
        # mask[i] stands for the odd number low + 2*i
        high = min(low + 2 * SEGMENT_ODDS, limit + 1)
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            if start % 2 == 0:
                start += p
            mask[(start - low) // 2 :: p] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 else high + 1
    return np.concatenate(chunks)


def prime_array(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit < SEGMENT_THRESHOLD:
        return np.flatnonzero(simple_sieve(limit)).astype(np.int64)
    return _segmented_primes(limit)


@lru_cache(maxsize=64)
def primes_up_to(limit: int) -> PrimeList:
    """All primes <= limit."""
    return PrimeList(tuple(int(p) for p in prime_array(limit)), max(limit, 0))


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    r = isqrt(n)
    d = 5
    while d <= r:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


def nth_prime(i: int) -> int:
    """p_i with p_1 = 2."""
    if i < 1:
        raise IndexError("prime indices start at 1")
    limit = 16
    while True:
        pl = primes_up_to(limit)
        if len(pl) >= i:
            return pl.p(i)
        limit *= 2


def basis_for(n: int) -> PrimeList:
    """The primes p with p*p <= n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return primes_up_to(isqrt(n))


# phi(x, a) for a <= _TABLE_DEPTH is periodic in x with period p_1*...*p_a
_TABLE_DEPTH = 6


@lru_cache(maxsize=None)
def _phi_table(a: int) -> tuple[int, int, list[int]]:
    primes = primes_up_to(17).primes[:a]
    period = int(np.prod(primes))
    keep = np.ones(period + 1, dtype=bool)
    keep[0] = False
    for p in primes:
        keep[::p] = False
    counts = np.cumsum(keep).tolist()
    return period, counts[period], counts


def _phi(x: int, a: int, primes: Sequence[int]) -> int:
    # count of 1 <= k <= x with no prime factor among primes[:a]
    if a == 0:
        return x
    if x <= primes[a - 1]:
        return 1 if x >= 1 else 0
    depth = min(a, _TABLE_DEPTH)
    period, per_period, counts = _phi_table(depth)
    q, r = divmod(x, period)
    total = q * per_period + counts[r]
    # phi(x, a) = phi(x, depth) - sum_{depth < i <= a} phi(x // p_i, i - 1)
    for i in range(depth + 1, a + 1):
        y = x // primes[i - 1]
        if y <= primes[i - 2]:
            # this and every later term is 1 while p_i <= x, else 0
            total -= max(0, bisect_right(primes, x, 0, a) - (i - 1))
            break
        total -= _phi(y, i - 1, primes)
    return total


def legendre_pi(n: int) -> int:
    """pi(n) as (pi(sqrt n) - 1) plus the inclusion-exclusion count of
    k <= n coprime to every prime <= sqrt n.

    The count is evaluated by Legendre's recursion, which sums the same
    signed floor terms ``+-floor(n / d)`` and skips the ones that vanish.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    basis = basis_for(n)
    if n < 4:
        return sum(1 for k in range(2, n + 1) if is_prime(k))
    return (len(basis) - 1) + _phi(n, len(basis), basis.primes)


def prime_pi(n: int) -> int:
    """pi(n) by direct sieve count (oracle for :func:`legendre_pi`)."""
    return int(prime_array(n).size)
