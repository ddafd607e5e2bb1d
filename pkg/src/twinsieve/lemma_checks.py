"""Instance-wise evaluation of the sieve identities and lemmas.

Each :class:`IdentityId` names one claimed relation.  :func:`check_identity`
evaluates both sides on concrete parameters; :func:`scan_grid` sweeps a
parameter grid and collects every failing cell as a re-runnable witness.

Notation used in the comments: ``op_p(m)`` is the number of k in [1, m]
with k mod p not in {0, p - 2} (only residue 0 for p = 2).  Operator
expressions over several primes are counted on the actual sets through
:mod:`twinsieve.residue_sieve`; the single-prime floor identities are plain
integer arithmetic.  Ceilings are ``ceil(x (p - 3) / p) = (x (p - 3) + p - 1) // p``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import CapacityError, PreconditionError
from .inclusion_exclusion import crt_first_position
from .prime_basis import is_prime, primes_up_to
from .residue_sieve import sequential_count, set_sieve_count, sieve_count, window_count

CELL_CAP = 10**7
CSV_HEADER = "id,params,lhs,rhs,holds,diagnostics"


class IdentityId(str, Enum):
    EQ3_1 = "EQ3_1"  # operator products commute
    EQ3_2 = "EQ3_2"  # floor of a sum
    EQ3_3 = "EQ3_3"  # op_p(a p + b) = a (p - 2) + op_p(b)
    EQ3_4 = "EQ3_4"  # -2 <= op_p(m1 + m2) - op_p(m1) - op_p(m2) <= 1
    EQ3_5 = "EQ3_5"  # windowed split of op_p
    EQ3_6 = "EQ3_6"  # op_p is monotone
    L4_1 = "L4_1"  # op_p(m) >= ceil(m (1 - 3/p)) for m >= p
    L4_2 = "L4_2"  # plain/twiddle subsequences vs natural sequence, |eps| <= 1
    L4_3 = "L4_3"  # two-prime reduction for m >= p_j**2
    L4_4 = "L4_4"  # op_{2,3}(m) >= ceil(m / 6) - 1
    L4_5 = "L4_5"  # multi-prime reduction

    def __str__(self) -> str:
        return self.value


REQUIRED = {
    IdentityId.EQ3_1: ("n", "order", "twin"),
    IdentityId.EQ3_2: ("p", "m1", "m2"),
    IdentityId.EQ3_3: ("p", "m"),
    IdentityId.EQ3_4: ("p", "m1", "m2"),
    IdentityId.EQ3_5: ("p", "m1", "m2"),
    IdentityId.EQ3_6: ("p", "m", "m_prime"),
    IdentityId.L4_1: ("p", "m"),
    IdentityId.L4_2: ("p_i", "p_j", "m", "variant"),
    IdentityId.L4_3: ("p_i", "p_j", "m"),
    IdentityId.L4_4: ("m",),
    IdentityId.L4_5: ("primes", "p_j", "m"),
}

# parameters holding a tuple of primes rather than a single integer
LIST_PARAMS = frozenset({"order", "primes"})


@dataclass(frozen=True)
class CheckResult:
    id: IdentityId
    params: Mapping[str, object]
    lhs: int
    rhs: int
    diagnostics: Mapping[str, int] = field(default_factory=dict)
    holds: bool = True

    def csv(self) -> str:
        diag = ";".join(f"{k}={v}" for k, v in self.diagnostics.items())
        return f"{self.id},{format_params(self.params)},{self.lhs},{self.rhs},{str(self.holds).lower()},{diag}"


def format_params(params: Mapping[str, object]) -> str:
    parts = []
    for k, v in params.items():
        if isinstance(v, tuple):
            v = "+".join(str(x) for x in v)
        parts.append(f"{k}={v}")
    return ";".join(parts)


def parse_params(text: str) -> dict[str, object]:
    """Inverse of :func:`format_params`."""
    out: dict[str, object] = {}
    if not text:
        return out
    for part in text.split(";"):
        k, _, v = part.partition("=")
        if k in LIST_PARAMS:
            out[k] = tuple(int(x) for x in v.split("+")) if v else ()
        else:
            out[k] = int(v)
    return out


def parse_row(line: str) -> tuple[IdentityId, dict[str, object]]:
    """Identity and parameters from one report CSV row."""
    tag, params, *_ = line.split(",")
    return IdentityId(tag), parse_params(params)


# integer helpers


def op(m: int, p: int) -> int:
    """op_p(m) by floor arithmetic."""
    if m <= 0:
        return 0
    return m - m // p - ((m + 2) // p if p != 2 else 0)


def ceil_scaled(m: int, p: int) -> int:
    """ceil(m * (1 - 3/p)) for m >= 0."""
    return (m * (p - 3) + p - 1) // p


@lru_cache(maxsize=4096)
def theta(plain_prime: int, twiddle_prime: int) -> int:
    """P - lam for the first position lam that is 0 mod ``plain_prime`` and
    -2 mod ``twiddle_prime``, P their product."""
    return plain_prime * twiddle_prime - crt_first_position([plain_prime], [twiddle_prime])


def _prime(x, name):
    if not isinstance(x, (int, np.integer)) or not is_prime(int(x)):
        raise PreconditionError(f"{name}={x} is not prime")
    return int(x)


def _odd_prime(x, name):
    p = _prime(x, name)
    if p == 2:
        raise PreconditionError(f"{name} must be an odd prime")
    return p


def _nonneg(x, name):
    if not isinstance(x, (int, np.integer)) or x < 0:
        raise PreconditionError(f"{name}={x} must be a non-negative integer")
    return int(x)


# one evaluator per identity; each returns (lhs, rhs, diagnostics, holds)


def _eq3_1(n, order, twin):
    n = _nonneg(n, "n")
    order = tuple(_prime(p, "order") for p in order)
    if len(set(order)) != len(order):
        raise PreconditionError("order repeats a prime")
    if twin not in (0, 1):
        raise PreconditionError("twin must be 0 or 1")
    # literal deletion in the given order vs the order-free residue filter
    lhs = sequential_count(np.arange(1, n + 1, dtype=np.int64), order, twin=bool(twin))
    rhs = sieve_count(n, order, twin=bool(twin))
    return lhs, rhs, {}, lhs == rhs


def _eq3_2(p, m1, m2):
    p, m1, m2 = _prime(p, "p"), _nonneg(m1, "m1"), _nonneg(m2, "m2")
    lhs = (m1 + m2) // p
    rhs = m1 // p + m2 // p + (m1 % p + m2 % p) // p
    return lhs, rhs, {}, lhs == rhs


def _eq3_3(p, m):
    p, m = _odd_prime(p, "p"), _nonneg(m, "m")
    a, b = divmod(m, p)
    lhs = op(m, p)
    rhs = a * (p - 2) + op(b, p)
    return lhs, rhs, {"a": a, "b": b}, lhs == rhs


def _eq3_4(p, m1, m2):
    p, m1, m2 = _odd_prime(p, "p"), _nonneg(m1, "m1"), _nonneg(m2, "m2")
    lhs = op(m1 + m2, p)
    rhs = op(m1, p) + op(m2, p)
    delta = lhs - rhs
    alpha, beta = m1 % p, m2 % p
    # residue-only form of delta
    delta_res = -((alpha + beta) // p) - ((alpha + beta + 2) // p) + (alpha + 2) // p + (beta + 2) // p
    diag = {"delta12": delta, "alpha": alpha, "beta": beta, "delta12_residue": delta_res}
    return lhs, rhs, diag, -2 <= delta <= 1


def _eq3_5(p, m1, m2):
    p, m1, m2 = _odd_prime(p, "p"), _nonneg(m1, "m1"), _nonneg(m2, "m2")
    lhs = sieve_count(m1 + m2, (p,))
    window = window_count(m1 + 1, m1 + m2, (p,))
    rhs = sieve_count(m1, (p,)) + window
    window_floor = m2 - (m1 % p + m2) // p - (m2 + (m1 + 2) % p) // p
    diag = {"window": window, "window_floor": window_floor}
    return lhs, rhs, diag, lhs == rhs and window == window_floor


def _eq3_6(p, m, m_prime):
    p, m, m_prime = _prime(p, "p"), _nonneg(m, "m"), _nonneg(m_prime, "m_prime")
    if m_prime < m:
        raise PreconditionError("requires m_prime >= m")
    lhs = sieve_count(m_prime, (p,))
    rhs = sieve_count(m, (p,))
    return lhs, rhs, {"window": lhs - rhs}, lhs >= rhs


def _l4_1(p, m):
    p, m = _odd_prime(p, "p"), _nonneg(m, "m")
    if m < p:
        raise PreconditionError("requires m >= p")
    lhs = sieve_count(m, (p,))
    rhs = ceil_scaled(m, p)
    return lhs, rhs, {"slack": lhs - rhs}, lhs >= rhs


def _l4_2(p_i, p_j, m, variant):
    p_i, p_j, m = _prime(p_i, "p_i"), _odd_prime(p_j, "p_j"), _nonneg(m, "m")
    if p_i == p_j:
        raise PreconditionError("requires p_i != p_j")
    P = p_i * p_j
    r = m % P
    if variant == 1:
        # multiples of p_j in [1, m], filtered by p_i
        q = m // p_j
        xs = p_j * np.arange(1, q + 1, dtype=np.int64)
        t = theta(p_j, p_i) if p_i != 2 else 0
        eps = 0 if p_i == 2 else -((r + t) // P) + (r + 2 * p_j) // P
        diag = {"eps1": eps, "theta_ji": t}
    elif variant == 2:
        # k in [1, m] with k = -2 mod p_j, filtered by p_i
        q = (m + 2) // p_j
        xs = p_j * np.arange(1, q + 1, dtype=np.int64) - 2
        t = theta(p_i, p_j)
        eps = 0 if p_i == 2 else -((r + t) // P) + (r + 2 + 2 * p_j) // P
        diag = {"eps2": eps, "theta_ij": t}
    else:
        raise PreconditionError("variant must be 1 (plain) or 2 (twiddle)")
    lhs = set_sieve_count(xs, (p_i,))
    rhs = sieve_count(q, (p_i,))
    return lhs, rhs, diag, -1 <= lhs - rhs <= 1


def _l4_3_diagnostics(p_i, p_j, m):
    P = p_i * p_j
    s, t = divmod(m, P)
    a, b = divmod(t, p_j)
    f = (3 * t) // p_j
    g = (3 * b) // p_j
    d = {"s": s, "a": a, "b": b, "theta_ij": theta(p_i, p_j)}
    if p_i == 2:
        e1 = ((a + g) % 2 + (a * p_j + b - a - g) % 2) // 2
        e3 = (a + g) // 2
        e4 = (b + 2) // p_j
        d.update(eps1=e1, eps3=e3, eps4=e4, delta_eps=e1 + e3 + e4)
    else:
        d["theta_ji"] = theta(p_j, p_i)
        e1 = (f % p_i + (t - f) % p_i) // p_i
        e2 = (f % p_i + (t + 2 - f) % p_i) // p_i
        e3 = (3 * a + g) // p_i
        e4 = (b + 2) // p_j
        d.update(eps1=e1, eps2=e2, eps3=e3, eps4=e4, delta_eps=e1 + e2 + 2 * e3 + e4)
    return d


def _l4_3(p_i, p_j, m):
    p_i, p_j, m = _prime(p_i, "p_i"), _odd_prime(p_j, "p_j"), _nonneg(m, "m")
    if not p_j > p_i:
        raise PreconditionError("requires p_j > p_i")
    if m < p_j * p_j:
        raise PreconditionError("requires m >= p_j**2")
    reduced = ceil_scaled(m, p_j)
    lhs = sieve_count(m, (p_i, p_j))
    rhs = sieve_count(reduced, (p_i,))
    diag = {"eps": lhs - rhs, "reduced_m": reduced}
    diag.update(_l4_3_diagnostics(p_i, p_j, m))
    return lhs, rhs, diag, lhs >= rhs


def _l4_4(m):
    m = _nonneg(m, "m")
    lhs = sieve_count(m, (2, 3))
    rhs = (m + 5) // 6 - 1
    return lhs, rhs, {"slack": lhs - rhs}, lhs >= rhs


def _l4_5(primes, p_j, m):
    primes = tuple(_prime(p, "primes") for p in primes)
    p_j, m = _odd_prime(p_j, "p_j"), _nonneg(m, "m")
    if not primes:
        raise PreconditionError("primes must be non-empty")
    if len(set(primes)) != len(primes):
        raise PreconditionError("primes repeats a prime")
    if not p_j > max(primes):
        raise PreconditionError("requires p_j > every listed prime")
    if m < p_j * p_j:
        raise PreconditionError("requires m >= p_j**2")
    reduced = ceil_scaled(m, p_j)
    lhs = sieve_count(m, primes + (p_j,))
    rhs = sieve_count(reduced, primes)
    return lhs, rhs, {"eps": lhs - rhs, "reduced_m": reduced}, lhs >= rhs


_EVALUATORS: dict[IdentityId, Callable] = {
    IdentityId.EQ3_1: _eq3_1,
    IdentityId.EQ3_2: _eq3_2,
    IdentityId.EQ3_3: _eq3_3,
    IdentityId.EQ3_4: _eq3_4,
    IdentityId.EQ3_5: _eq3_5,
    IdentityId.EQ3_6: _eq3_6,
    IdentityId.L4_1: _l4_1,
    IdentityId.L4_2: _l4_2,
    IdentityId.L4_3: _l4_3,
    IdentityId.L4_4: _l4_4,
    IdentityId.L4_5: _l4_5,
}


def check_identity(id, params: Mapping[str, object]) -> CheckResult:
    """Evaluate one identity instance.

    Raises :class:`PreconditionError` when ``params`` do not name exactly
    the identity's parameters or break its hypotheses (e.g. m < p_j**2).
    """
    id = IdentityId(id)
    want = REQUIRED[id]
    if set(params) != set(want):
        raise PreconditionError(f"{id} takes parameters {want}, got {tuple(params)}")
    args = [params[k] for k in want]
    lhs, rhs, diag, holds = _EVALUATORS[id](*args)
    clean = {k: tuple(params[k]) if k in LIST_PARAMS else params[k] for k in want}
    return CheckResult(id, clean, lhs, rhs, diag, bool(holds))


# grids


@dataclass(frozen=True)
class Grid:
    """A finite, ordered collection of parameter cells, produced lazily."""

    description: str
    factory: Callable[[], Iterable[dict]]
    size: int

    def __iter__(self) -> Iterator[dict]:
        return iter(self.factory())

    @classmethod
    def of(cls, cells: Iterable[dict], description: str = "explicit") -> "Grid":
        cells = list(cells)
        return cls(description, lambda: cells, len(cells))


def _primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in primes_up_to(max(hi, 0)).primes if p >= lo]


def _make(description, gen):
    size = sum(1 for _ in gen())
    return Grid(description, gen, size)


def default_grid(id, pmax: int = 97, mmax: int | None = None, nmax: int = 2000) -> Grid:
    """Default sweep for each identity.

    ``pmax`` bounds the primes, ``mmax`` the free length parameter where the
    identity has one (L4_1: 5000, EQ3_3: 2000, L4_4: 5000 when omitted),
    ``nmax`` the sequence length of EQ3_1.  EQ3_5, EQ3_6 and L4_2 cap their
    primes at 47 to bound the cell count.
    """
    id = IdentityId(id)
    small = min(pmax, 47)

    if id is IdentityId.EQ3_1:
        base = primes_up_to(11).primes[: 5]
        base = tuple(p for p in base if p <= pmax)

        def gen():
            for k in range(len(base) + 1):
                for subset in combinations(base, k):
                    for order in permutations(subset):
                        for twin in (0, 1):
                            for n in range(1, nmax + 1):
                                yield {"n": n, "order": order, "twin": twin}

        return _make(f"EQ3_1: orders of subsets of {list(base)}, twin in {{0,1}}, n in [1,{nmax}]", gen)

    if id in (IdentityId.EQ3_2, IdentityId.EQ3_4):

        def gen():
            for p in _primes_between(3, pmax):
                for m1 in range(3 * p + 1):
                    for m2 in range(3 * p + 1):
                        yield {"p": p, "m1": m1, "m2": m2}

        return _make(f"{id}: p prime in [3,{pmax}], m1,m2 in [0,3p]", gen)

    if id is IdentityId.EQ3_3:
        top = 2000 if mmax is None else mmax

        def gen():
            for p in _primes_between(3, pmax):
                for m in range(top + 1):
                    yield {"p": p, "m": m}

        return _make(f"EQ3_3: p prime in [3,{pmax}], m in [0,{top}]", gen)

    if id is IdentityId.EQ3_5:

        def gen():
            for p in _primes_between(3, small):
                for m1 in range(3 * p + 1):
                    for m2 in range(3 * p + 1):
                        yield {"p": p, "m1": m1, "m2": m2}

        return _make(f"EQ3_5: p prime in [3,{small}], m1,m2 in [0,3p]", gen)

    if id is IdentityId.EQ3_6:

        def gen():
            for p in _primes_between(2, small):
                for m in range(3 * p + 1):
                    for m_prime in range(m, 3 * p + 1):
                        yield {"p": p, "m": m, "m_prime": m_prime}

        return _make(f"EQ3_6: p prime in [2,{small}], 0 <= m <= m' <= 3p", gen)

    if id is IdentityId.L4_1:
        top = 5000 if mmax is None else mmax

        def gen():
            for p in _primes_between(3, pmax):
                for m in range(p, top + 1):
                    yield {"p": p, "m": m}

        return _make(f"L4_1: p prime in [3,{pmax}], m in [p,{top}]", gen)

    if id is IdentityId.L4_2:

        def gen():
            ps = _primes_between(2, small)
            for p_i, p_j in combinations(ps, 2):
                for variant in (1, 2):
                    for m in range(3 * p_i * p_j + 1):
                        yield {"p_i": p_i, "p_j": p_j, "m": m, "variant": variant}

        return _make(f"L4_2: p_i < p_j <= {small}, variant in {{1,2}}, m in [0,3 p_i p_j]", gen)

    if id is IdentityId.L4_3:

        def gen():
            ps = _primes_between(2, pmax)
            for p_i, p_j in combinations(ps, 2):
                lo = p_j * p_j
                for m in range(lo, lo + 3 * p_i * p_j + 1):
                    yield {"p_i": p_i, "p_j": p_j, "m": m}

        return _make(f"L4_3: p_i < p_j <= {pmax}, m in [p_j^2, p_j^2 + 3 p_i p_j]", gen)

    if id is IdentityId.L4_4:
        top = 5000 if mmax is None else mmax

        def gen():
            for m in range(1, top + 1):
                yield {"m": m}

        return _make(f"L4_4: m in [1,{top}]", gen)

    if id is IdentityId.L4_5:

        def gen():
            ps = _primes_between(2, pmax)
            for j in range(1, len(ps)):
                below, p_j = tuple(ps[:j]), ps[j]
                if p_j < 3:
                    continue
                lo = p_j * p_j
                for m in range(lo, lo + 3 * below[-1] * p_j + 1):
                    yield {"primes": below, "p_j": p_j, "m": m}

        return _make(
            f"L4_5: p_j prime in [3,{pmax}], primes = all primes < p_j, "
            "m in [p_j^2, p_j^2 + 3 p_prev p_j]",
            gen,
        )

    raise ValueError(id)


@dataclass(frozen=True)
class ScanReport:
    id: IdentityId
    grid: str
    cells_checked: int
    skipped: int
    violations: tuple[CheckResult, ...]
    wall_time: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def csv(self) -> list[str]:
        return [CSV_HEADER] + [v.csv() for v in self.violations]


def iter_checks(id, grid: Grid, cell_cap: int = CELL_CAP) -> Iterator[CheckResult | None]:
    """Evaluate every cell in order; ``None`` marks a skipped cell."""
    id = IdentityId(id)
    if grid.size > cell_cap:
        raise CapacityError(f"grid has {grid.size} cells, cap is {cell_cap}")
    for cell in grid:
        try:
            yield check_identity(id, cell)
        except PreconditionError:
            yield None


def scan_grid(id, grid: Grid | Iterable[dict], cell_cap: int = CELL_CAP) -> ScanReport:
    """Run :func:`check_identity` over every cell; failing cells are kept
    with their full parameters."""
    id = IdentityId(id)
    if not isinstance(grid, Grid):
        grid = Grid.of(grid)
    start = time.perf_counter()
    checked = skipped = 0
    violations = []
    for result in iter_checks(id, grid, cell_cap):
        if result is None:
            skipped += 1
            continue
        checked += 1
        if not result.holds:
            violations.append(result)
    return ScanReport(id, grid.description, checked, skipped, tuple(violations), time.perf_counter() - start)
