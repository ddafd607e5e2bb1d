"""Exact evaluation of the growth quantity W(V), the simplified twin-pair
lower bound D'(n) and the data behind the bound-vs-actual figures.

Every comparison is done on :class:`fractions.Fraction` values; floats only
appear in the rendered ``w_float`` column.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import CapacityError, PreconditionError
from .prime_basis import basis_for, nth_prime, primes_up_to
from .residue_sieve import ASSEMBLY_THRESHOLD, brute_twin_count, d_sqrt

FIGURE_HEADER = "v,p_v,n,w_float,d_prime,d_actual,ratio"
# largest n a figure row may brute-force
FIGURE_BUDGET = 10**9


def _primes_through(v: int) -> tuple[int, ...]:
    limit = 32
    while True:
        ps = primes_up_to(limit).primes
        if len(ps) >= v:
            return ps[:v]
        limit *= 2


def _p(ps, i):
    return ps[i - 1]


def _product(ps, v: int) -> Fraction:
    # prod_{i=3}^{v-1} (p_{i+1} - 3) / p_i, empty (=1) for v <= 3
    out = Fraction(1)
    for i in range(3, v):
        out *= Fraction(_p(ps, i + 1) - 3, _p(ps, i))
    return out


def w_value(V: int) -> Fraction:
    """W(V) = p_V * prod_{i=3}^{V-1} (p_{i+1} - 3) / p_i.

    The growth argument starts at V = 5; the formula itself is defined from
    V = 3 (empty product) and is evaluated there for the figure rows.
    """
    if V < 3:
        raise PreconditionError(f"V must be >= 3, got {V}")
    ps = _primes_through(V)
    return _p(ps, V) * _product(ps, V)


def w_sequence(v_min: int, v_max: int) -> Iterator[tuple[int, Fraction]]:
    """(V, W(V)) for V in [v_min, v_max], built by running product."""
    if not 3 <= v_min <= v_max:
        raise PreconditionError(f"need 3 <= v_min <= v_max, got {v_min}, {v_max}")
    ps = _primes_through(v_max)
    prod = _product(ps, v_min)
    for V in range(v_min, v_max + 1):
        if V > v_min:
            prod *= Fraction(_p(ps, V) - 3, _p(ps, V - 1))
        yield V, _p(ps, V) * prod


class GrowthCheck(NamedTuple):
    holds: bool
    witness: int  # p_{V+1}**2 - 3 p_{V+1} - p_V**2
    gap: int  # half the prime gap, p_{V+1} = p_V + 2*gap
    formula_witness: int  # 3(gap - 1) p_V + gap (p_V + 4 gap - 6)


def w_growth_check(V: int) -> GrowthCheck:
    if V < 5:
        raise PreconditionError(f"V must be >= 5, got {V}")
    ps = _primes_through(V + 1)
    p, q = _p(ps, V), _p(ps, V + 1)
    w, w_next = w_value(V), w_value(V + 1)
    gap = (q - p) // 2
    return GrowthCheck(
        holds=w_next > w > 6,
        witness=q * q - 3 * q - p * p,
        gap=gap,
        formula_witness=3 * (gap - 1) * p + gap * (p + 4 * gap - 6),
    )


def _ceil(x: Fraction) -> int:
    return -(-x.numerator // x.denominator)


def _core(v: int) -> Fraction:
    # (p_v / 3) * prod_{i=3}^{v-1} (p_{i+1} - 3) / p_i, for v >= 2
    ps = _primes_through(v)
    return Fraction(_p(ps, v), 3) * _product(ps, v)


def d_prime(v: int) -> int:
    """ceil((p_v / 3) * prod_{i=3}^{v-1} (p_{i+1} - 3) / p_i) - 2; may be
    negative for small v and is returned as is."""
    if v < 3:
        raise PreconditionError(f"v must be >= 3, got {v}")
    return _ceil(_core(v)) - 2


def lower_bound_d(n: int) -> int:
    """Claimed lower bound on the twin count up to n:
    ceil(core(v)) + D(sqrt n) - 2, with v the index of the largest
    prime <= sqrt(n)."""
    if n < ASSEMBLY_THRESHOLD:
        raise PreconditionError(f"n must be >= {ASSEMBLY_THRESHOLD}, got {n}")
    v = len(basis_for(n))
    return _ceil(_core(v)) + d_sqrt(n) - 2


@dataclass(frozen=True)
class BoundsRow:
    v: int
    p_v: int
    n: int
    w: Fraction
    d_prime: int
    d_actual: int
    ratio: Fraction | None

    @property
    def ratio_num(self) -> int | None:
        return None if self.ratio is None else self.ratio.numerator

    @property
    def ratio_den(self) -> int | None:
        return None if self.ratio is None else self.ratio.denominator

    def csv(self) -> str:
        ratio = "" if self.ratio is None else fixed(self.ratio, 4)
        return f"{self.v},{self.p_v},{self.n},{fixed(self.w, 6)},{self.d_prime},{self.d_actual},{ratio}"


def fixed(x: Fraction, places: int) -> str:
    """Decimal rendering of an exact rational, rounded half-even."""
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def figure_table(v_min: int, v_max: int, budget: int = FIGURE_BUDGET) -> list[BoundsRow]:
    """One row per v in [v_min, v_max] with n = p_v**2 + 1."""
    if not 3 <= v_min <= v_max:
        raise PreconditionError(f"need 3 <= v_min <= v_max, got {v_min}, {v_max}")
    top = nth_prime(v_max) ** 2 + 1
    if top > budget:
        raise CapacityError(f"row n = {top} exceeds brute-force budget {budget}")
    rows = []
    for v in range(v_min, v_max + 1):
        p = nth_prime(v)
        n = p * p + 1
        dp = d_prime(v)
        actual = brute_twin_count(n)
        rows.append(BoundsRow(v, p, n, w_value(v), dp, actual, Fraction(actual, dp) if dp > 0 else None))
    return rows


def figure_csv(rows: list[BoundsRow]) -> list[str]:
    return [FIGURE_HEADER] + [r.csv() for r in rows]

