"""Direct simulation of the twin sieve.

Every k in Z = {1..n} is paired with k + 2.  A basis prime p deletes k when
p divides k or p divides k + 2, i.e. when ``k mod p`` lies in {0, p - 2}.
For p = 2 both conditions coincide and only residue 0 is deleted.  Deletion
is realised as residue filtering, so the order in which primes are applied
never changes the result; :func:`deletion_trace` replays the literal
step-by-step deletion for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .prime_basis import basis_for, is_prime, next_prime, prime_array, simple_sieve

# n + 2 must stay representable in a signed 64-bit integer
MAX_N = 2**63 - 3
# below this n, the basis lacks p = 3 and the assembly formula does not apply
ASSEMBLY_THRESHOLD = 9
# values per segment in the segmented twin counter
TWIN_SEGMENT = 1 << 20


def forbidden_residues(p: int) -> frozenset[int]:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    return frozenset({0}) if p == 2 else frozenset({0, p - 2})


@dataclass(frozen=True)
class ResidueBasis:
    """Per-prime forbidden residue sets, primes strictly ascending."""

    entries: tuple[tuple[int, frozenset[int]], ...]

    def __post_init__(self):
        primes = self.primes
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise PreconditionError(f"basis primes must be strictly ascending: {primes}")
        for p, forbidden in self.entries:
            if forbidden != forbidden_residues(p):
                raise PreconditionError(f"wrong forbidden residues for {p}: {sorted(forbidden)}")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "ResidueBasis":
        """Build from any iterable of distinct primes (sorted here)."""
        ps = sorted(int(p) for p in primes)
        if len(set(ps)) != len(ps):
            raise PreconditionError(f"repeated prime in basis: {ps}")
        return cls(tuple((p, forbidden_residues(p)) for p in ps))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _as_basis(basis) -> ResidueBasis:
    return basis if isinstance(basis, ResidueBasis) else ResidueBasis.of(basis)


@dataclass(frozen=True)
class SurvivorReport:
    n: int
    basis: ResidueBasis
    survivors: tuple[int, ...]
    d0: int


def _keep_mask(values: np.ndarray, primes: Iterable[int]) -> np.ndarray:
    keep = np.ones(values.shape, dtype=bool)
    for p in primes:
        r = values % p
        keep &= r != 0
        if p != 2:
            keep &= r != p - 2
    return keep


def _range_mask(n: int, primes: Iterable[int], twin: bool = True) -> np.ndarray:
    # mask[k] is True when k in [1, n] survives; index 0 is unused
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    for p in primes:
        mask[p::p] = False
        if twin and p != 2:
            mask[p - 2 :: p] = False
    return mask


def survivors(n: int, basis) -> SurvivorReport:
    """Elements of {1..n} left after deleting, for every basis prime p,
    the k with k mod p in the forbidden set of p."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    basis = _as_basis(basis)
    kept = np.flatnonzero(_range_mask(n, basis.primes))
    return SurvivorReport(n, basis, tuple(kept.tolist()), int(kept.size))


def d0_count(n: int, basis) -> int:
    """Survivor count of {1..n} without materialising the survivors."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    return int(np.count_nonzero(_range_mask(n, _as_basis(basis).primes)))


def survivor_prefix_counts(n_max: int, basis) -> np.ndarray:
    """``out[m]`` is the survivor count of {1..m} for 0 <= m <= n_max.

    Valid because whether k survives depends on k alone, not on n.
    """
    return np.cumsum(_range_mask(n_max, _as_basis(basis).primes))


# bounded-size prefix tables for repeated counts over the same primes
_PERIOD_CAP = 1 << 16


@lru_cache(maxsize=256)
def _period_counts(primes: tuple[int, ...], twin: bool) -> tuple[int, list[int]]:
    period = 1
    for p in primes:
        period *= p
    return period, np.cumsum(_range_mask(period, primes, twin)).tolist()


@lru_cache(maxsize=16)
def _bucket_counts(primes: tuple[int, ...], size: int, twin: bool) -> list[int]:
    return np.cumsum(_range_mask(size, primes, twin)).tolist()


def sieve_count(m: int, primes: Sequence[int], twin: bool = True) -> int:
    """Survivor count of {1..m} under the twin sieve for ``primes``.

    Same value as ``d0_count(m, primes)``; ``twin=False`` deletes multiples
    only.  Repeated queries over one prime set are served from a cached
    cumulative table: one period of the residue pattern when the primes'
    product is small, otherwise a table over [0, 2**k] with 2**k > m.
    """
    if m <= 0:
        return 0
    key = tuple(sorted(primes))
    period = 1
    for p in key:
        period *= p
        if period > _PERIOD_CAP:
            break
    if period <= _PERIOD_CAP:
        period, counts = _period_counts(key, twin)
        q, r = divmod(m, period)
        return q * counts[period] + counts[r]
    return _bucket_counts(key, 1 << m.bit_length(), twin)[m]


def set_sieve_count(xs: Sequence[int], basis) -> int:
    """Number of elements of an arbitrary integer list that survive the
    basis (element values are tested, not positions)."""
    if len(xs) == 0:
        return 0
    arr = np.asarray(xs, dtype=np.int64)
    if arr.min() < 1:
        raise PreconditionError("set elements must be positive")
    return int(np.count_nonzero(_keep_mask(arr, _as_basis(basis).primes)))


def window_count(lo: int, hi: int, primes: Sequence[int]) -> int:
    """Survivors among the consecutive integers lo..hi (inclusive)."""
    if hi < lo:
        return 0
    return set_sieve_count(np.arange(lo, hi + 1, dtype=np.int64), primes)


@dataclass(frozen=True)
class DeletionStep:
    prime: int
    residue: int
    remaining: tuple[int, ...]


def zeros_first_order(primes: Sequence[int]) -> list[tuple[int, int]]:
    """(prime, residue) pairs: every residue-0 deletion first, then the
    residue p-2 deletions, each group in ascending prime order."""
    ps = sorted(primes)
    return [(p, 0) for p in ps] + [(p, p - 2) for p in ps if p != 2]


def deletion_trace(xs: Sequence[int], steps: Sequence[tuple[int, int]]) -> list[DeletionStep]:
    """Literal sequential deletion from an explicit list.

    Each step removes, from whatever is left, the elements congruent to
    ``residue`` mod ``prime``.
    """
    current = list(xs)
    out = []
    for p, r in steps:
        current = [x for x in current if x % p != r]
        out.append(DeletionStep(p, r, tuple(current)))
    return out


# lookup tables are used for sequential deletion below this value
_LOOKUP_CAP = 1 << 22


@lru_cache(maxsize=128)
def _keep_table(p: int, twin: bool, size: int) -> np.ndarray:
    return _range_mask(size, (p,), twin) | (np.arange(size + 1) == 0)


def sequential_count(xs: Sequence[int], primes: Sequence[int], twin: bool = True) -> int:
    """Survivors after applying each prime's deletion in the given order,
    each step acting on the previous step's leftover list.

    With ``twin=False`` only multiples are deleted (the Legendre operator).
    """
    arr = np.asarray(xs, dtype=np.int64)
    for p in primes:
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
    if arr.size == 0:
        return 0
    top = int(arr.max())
    if arr.min() >= 0 and top < _LOOKUP_CAP:
        size = 1 << top.bit_length()
        for p in primes:
            arr = arr[_keep_table(p, twin, size)[arr]]
        return int(arr.size)
    for p in primes:
        r = arr % p
        keep = r != 0
        if twin and p != 2:
            keep &= r != p - 2
        arr = arr[keep]
    return int(arr.size)


def brute_twin_count_simple(n: int) -> int:
    """Unsegmented oracle: q <= n with q and q + 2 both prime."""
    if n < 3:
        return 0
    mask = simple_sieve(n + 2)
    return int(np.count_nonzero(mask[: n + 1] & mask[2 : n + 3]))


def brute_twin_count(n: int) -> int:
    """|{q <= n : q and q + 2 prime}| by segmented sieving of [1, n + 2]."""
    if n < 3:
        return 0
    if n < TWIN_SEGMENT:
        return brute_twin_count_simple(n)
    limit = n + 2
    base = prime_array(isqrt(limit))
    total = 0
    low = 0
    carry = None  # primality of the last two values of the previous segment
    while low <= limit:
        high = min(low + TWIN_SEGMENT, limit + 1)
        mask = np.ones(high - low, dtype=bool)
        if low == 0:
            mask[: min(2, high)] = False
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            mask[start - low :: p] = False
        if carry is not None:
            mask = np.concatenate([carry, mask])
            first = low - 2
        else:
            first = low
        # pairs (q, q + 2) with q in [first, high - 3], q <= n
        last_q = min(high - 3, n)
        if last_q >= first:
            span = last_q - first + 1
            total += int(np.count_nonzero(mask[:span] & mask[2 : span + 2]))
        carry = mask[-2:]
        low = high
    return total


def is_twin_first(q: int) -> bool:
    return is_prime(q) and is_prime(q + 2)


def twin_first_up_to(bound: int) -> int:
    """Number of twin-first primes q <= bound."""
    return brute_twin_count_simple(bound) if bound >= 3 else 0


def d1_correction(n: int) -> int:
    """1 when the pair (P - 2, P) with P = p_{v+1}**2 falls inside the
    sieved range and P - 2 is prime, else 0.

    For n >= 9 every survivor k is a prime greater than sqrt(n), and k + 2
    is prime too unless k + 2 is exactly p_{v+1}**2 (the smallest square
    of a non-basis prime).  That can happen for k = n (n + 2 = p_{v+1}**2,
    n prime) and also for k = n - 1 when n + 1 = p_{v+1}**2.
    """
    if n < ASSEMBLY_THRESHOLD:
        raise PreconditionError(f"n must be >= {ASSEMBLY_THRESHOLD}, got {n}")
    q = next_prime(isqrt(n))
    k = q * q - 2
    return int(k <= n and is_prime(k))


def d_sqrt(n: int) -> int:
    """Twin-first primes q <= p_v, with p_v the largest prime <= sqrt(n)."""
    basis = basis_for(n)
    return twin_first_up_to(basis.primes[-1]) if len(basis) else 0


def twin_count(n: int) -> int:
    """Twin pairs with first member <= n, assembled as D0 + D(sqrt n) - D1."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if n > MAX_N:
        raise OverflowError(f"n + 2 overflows 64 bits for n = {n}")
    if n < ASSEMBLY_THRESHOLD:
        return brute_twin_count(n)
    return d0_count(n, basis_for(n)) + d_sqrt(n) - d1_correction(n)
