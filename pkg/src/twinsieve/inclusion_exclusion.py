"""Inclusion-exclusion expansion of the twin-sieve operator product.

Expanding ``n [1 - 1/2] * prod_{p odd} [1 - 1/p - ~1/p]`` gives one signed
term per way of choosing, for each basis prime, nothing, its plain factor
(residue 0) or its twiddle factor (residue p - 2).  A term with plain set A
and twiddle set B counts the k <= n satisfying all of its congruences at
once; by CRT those k form a single class ``lambda mod P`` with P the product
of A and B, so the term value is ``floor((n + P - lambda) / P)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, PreconditionError
from .prime_basis import is_prime

TERM_CAP = 10**6

CSV_HEADER = "sign,plain,twiddle,modulus,lambda,value"


def _check_sets(plain: Iterable[int], twiddle: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    a = tuple(sorted(set(plain)))
    b = tuple(sorted(set(twiddle)))
    if set(a) & set(b):
        raise PreconditionError(f"plain and twiddle sets overlap: {sorted(set(a) & set(b))}")
    if 2 in b:
        raise PreconditionError("2 has no twiddle factor")
    for p in a + b:
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
    return a, b


def crt_first_position(plain: Iterable[int], twiddle: Iterable[int]) -> int:
    """Smallest lam >= 1 with lam = 0 mod p on ``plain`` and
    lam = p - 2 mod p on ``twiddle``."""
    a, b = _check_sets(plain, twiddle)
    x, modulus = 0, 1
    for p, r in [(p, 0) for p in a] + [(p, p - 2) for p in b]:
        # x + modulus*t = r (mod p)
        t = (r - x) * pow(modulus, -1, p) % p
        x += modulus * t
        modulus *= p
    x %= modulus
    return x if x else modulus


@dataclass(frozen=True)
class IETerm:
    plain: tuple[int, ...]
    twiddle: tuple[int, ...]
    sign: int
    modulus: int
    lam: int

    @classmethod
    def make(cls, plain: Iterable[int] = (), twiddle: Iterable[int] = ()) -> "IETerm":
        a, b = _check_sets(plain, twiddle)
        modulus = 1
        for p in a + b:
            modulus *= p
        sign = -1 if (len(a) + len(b)) % 2 else 1
        return cls(a, b, sign, modulus, crt_first_position(a, b))

    @property
    def theta(self) -> int:
        """Offset in the floor form ``floor((n + theta) / modulus)``."""
        return self.modulus - self.lam

    def sort_key(self):
        return (self.modulus, self.plain, self.twiddle)


def term_value(n, term: IETerm):
    """Count of k in [1, n] with k = lam (mod modulus).

    ``n`` may be an int or an integer numpy array (evaluated elementwise).
    """
    return (n + term.modulus - term.lam) // term.modulus


def term_count(basis: Sequence[int]) -> int:
    count = 1
    for p in basis:
        count *= 2 if p == 2 else 3
    return count


def expand(basis: Sequence[int], cap: int = TERM_CAP) -> list[IETerm]:
    """All signed terms of the expanded product, in canonical order
    (ascending modulus, then plain set, then twiddle set)."""
    primes = sorted(int(p) for p in basis)
    if len(set(primes)) != len(primes):
        raise PreconditionError(f"repeated prime in basis: {primes}")
    size = term_count(primes)
    if size > cap:
        raise CapacityError(f"expansion has {size} terms, cap is {cap}")
    # 0 skip, 1 plain, 2 twiddle
    choices = [(0, 1) if p == 2 else (0, 1, 2) for p in primes]
    terms = []
    for pick in product(*choices):
        plain = [p for p, c in zip(primes, pick) if c == 1]
        twiddle = [p for p, c in zip(primes, pick) if c == 2]
        terms.append(IETerm.make(plain, twiddle))
    terms.sort(key=IETerm.sort_key)
    return terms


def d0_via_ie(n, basis: Sequence[int], cap: int = TERM_CAP):
    """Survivor count of {1..n} as the signed sum of expansion terms.

    Accepts an int or an integer numpy array of n values.
    """
    if np.any(np.asarray(n) < 1):
        raise PreconditionError("n must be >= 1")
    total = 0
    for term in expand(basis, cap):
        total = total + term.sign * term_value(n, term)
    return total


def _join(primes: Sequence[int]) -> str:
    return "+".join(str(p) for p in primes)


def term_rows(n: int, basis: Sequence[int], cap: int = TERM_CAP) -> list[str]:
    """CSV lines (header first) for every term evaluated at n."""
    lines = [CSV_HEADER]
    for t in expand(basis, cap):
        lines.append(f"{t.sign},{_join(t.plain)},{_join(t.twiddle)},{t.modulus},{t.lam},{term_value(n, t)}")
    return lines
