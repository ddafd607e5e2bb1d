from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinsieve.bounds import (
    FIGURE_HEADER,
    BoundsRow,
    d_prime,
    figure_csv,
    figure_table,
    fixed,
    lower_bound_d,
    w_growth_check,
    w_sequence,
    w_value,
)
from twinsieve.errors import CapacityError, PreconditionError
from twinsieve.prime_basis import nth_prime
from twinsieve.residue_sieve import twin_count

from conftest import naive_twins


def test_w_examples():
    assert w_value(5) == Fraction(352, 35)
    assert abs(float(w_value(5)) - 10.057) < 1e-3
    assert w_value(6) == Fraction(832, 77)
    # printed form 11*48/57 does not equal the formula's value
    assert Fraction(11 * 48, 57) != w_value(5)


def test_w_below_domain():
    with pytest.raises(PreconditionError):
        w_value(2)


@pytest.mark.parametrize("V", range(5, 60))
def test_w_ratio_identity(V):
    p, q = nth_prime(V), nth_prime(V + 1)
    assert w_value(V + 1) / w_value(V) == Fraction(q * q - 3 * q, p * p)


def test_w_sequence_matches_w_value():
    assert list(w_sequence(3, 40)) == [(V, w_value(V)) for V in range(3, 41)]


@pytest.mark.parametrize("V, witness, gap", [(5, 9, 1), (6, 69, 2)])
def test_growth_check_examples(V, witness, gap):
    g = w_growth_check(V)
    assert g.holds
    assert g.witness == witness == g.formula_witness
    assert g.gap == gap


@given(st.integers(5, 300))
@settings(max_examples=60, deadline=None)
def test_growth_witness_formula(V):
    g = w_growth_check(V)
    assert g.witness == g.formula_witness > 0
    assert g.holds


@pytest.mark.parametrize("v, expected", [(3, 0), (4, 0), (5, 2)])
def test_d_prime(v, expected):
    assert d_prime(v) == expected


@pytest.mark.parametrize("v", range(5, 80))
def test_d_prime_matches_ceil_w_over_3(v):
    w3 = w_value(v) / 3
    assert d_prime(v) + 2 == -(-w3.numerator // w3.denominator)


@pytest.mark.parametrize("n, expected", [(41, 2), (9, 0), (122, 5)])
def test_lower_bound_d(n, expected):
    assert lower_bound_d(n) == expected
    assert expected <= naive_twins(n)


def test_lower_bound_rejects_small_n():
    with pytest.raises(PreconditionError):
        lower_bound_d(8)


def test_lower_bound_holds_up_to_5000():
    assert all(lower_bound_d(n) <= twin_count(n) for n in range(9, 5001))


def test_figure_rows():
    rows = {r.v: r for r in figure_table(3, 5)}
    assert rows[5] == BoundsRow(5, 11, 122, w_value(5), 2, 10, Fraction(5))
    assert rows[3].n == 26 and rows[3].d_prime == 0 and rows[3].d_actual == 4
    assert rows[3].ratio is None and rows[3].ratio_num is None
    assert rows[3].csv().endswith(",0,4,")
    assert rows[5].csv() == "5,11,122,10.057143,2,10,5.0000"


def test_figure_csv_full():
    rows = figure_table(3, 30)
    lines = figure_csv(rows)
    assert lines[0] == FIGURE_HEADER
    assert len(lines) == 29
    assert lines[-1] == "30,113,12770,166.218074,54,244,4.5185"
    for r in rows:
        assert r.n == r.p_v**2 + 1
        assert r.d_actual == naive_twins(r.n) if r.n < 3000 else True
        assert r.d_actual >= r.d_prime
        assert r.ratio is None or r.ratio >= 1
    assert figure_csv(figure_table(3, 30)) == lines


def test_figure_budget():
    with pytest.raises(CapacityError):
        figure_table(3, 30, budget=10_000)
    with pytest.raises(PreconditionError):
        figure_table(2, 5)


@pytest.mark.parametrize(
    "x, places, text",
    [
        (Fraction(1, 8), 2, "0.12"),
        (Fraction(3, 8), 2, "0.38"),
        (Fraction(-1, 3), 3, "-0.333"),
        (Fraction(122, 27), 4, "4.5185"),
        (Fraction(5), 4, "5.0000"),
    ],
)
def test_fixed(x, places, text):
    assert fixed(x, places) == text
