import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import twinsieve.residue_sieve as rs
from twinsieve.errors import PreconditionError
from twinsieve.residue_sieve import (
    ResidueBasis,
    brute_twin_count,
    brute_twin_count_simple,
    d0_count,
    d1_correction,
    deletion_trace,
    forbidden_residues,
    zeros_first_order,
    sequential_count,
    set_sieve_count,
    sieve_count,
    survivor_prefix_counts,
    survivors,
    twin_count,
    window_count,
)

from conftest import naive_survivors, naive_twins, trial_prime

FIRST6 = (2, 3, 5, 7, 11, 13)


@pytest.mark.parametrize("p, expected", [(2, {0}), (3, {0, 1}), (7, {0, 5})])
def test_forbidden_residues(p, expected):
    assert forbidden_residues(p) == expected


def test_forbidden_residues_rejects_composite():
    with pytest.raises(PreconditionError):
        forbidden_residues(9)


def test_residue_basis_invariants():
    b = ResidueBasis.of([5, 2, 3])
    assert b.primes == (2, 3, 5)
    with pytest.raises(PreconditionError):
        ResidueBasis(((3, frozenset({0, 1})), (2, frozenset({0}))))
    with pytest.raises(PreconditionError):
        ResidueBasis(((3, frozenset({0})),))
    with pytest.raises(PreconditionError):
        ResidueBasis.of([3, 3])


def test_survivors_example_41():
    r = survivors(41, [2, 3, 5])
    assert r.survivors == (11, 17, 29, 41)
    assert r.d0 == 4


def test_survivors_single_prime_5():
    r = survivors(41, [5])
    assert r.d0 == 25
    assert r.survivors[:6] == (1, 2, 4, 6, 7, 9)
    assert r.survivors == (1, 2, 4, 6, 7, 9, 11, 12, 14, 16, 17, 19, 21, 22, 24, 26, 27, 29, 31, 32, 34, 36, 37, 39, 41)


def test_survivors_9():
    r = survivors(9, [2, 3])
    assert r.survivors == (5,) and r.d0 == 1


@pytest.mark.parametrize(
    "xs, basis, expected",
    [
        (list(range(1, 42)), [2, 3, 5], 4),
        ([], [2, 3], 0),
        ([24, 31, 32, 34, 36, 37, 39, 41], [2, 3], 1),
    ],
)
def test_set_sieve_count(xs, basis, expected):
    assert set_sieve_count(xs, basis) == expected


@pytest.mark.parametrize("n, expected", [(41, 0), (47, 1), (119, 0), (48, 1), (24, 1), (23, 1), (9, 0)])
def test_d1_correction(n, expected):
    assert d1_correction(n) == expected


def test_d1_rejects_small_n():
    with pytest.raises(PreconditionError):
        d1_correction(8)


@pytest.mark.parametrize("n, expected", [(41, 6), (9, 2), (100, 8), (48, 6), (24, 4)])
def test_twin_count(n, expected):
    assert twin_count(n) == expected
    assert naive_twins(n) == expected


@pytest.mark.parametrize("n, expected", [(1, 0), (4, 1), (41, 6), (122, 10)])
def test_brute_twin_count(n, expected):
    assert brute_twin_count(n) == expected
    assert naive_twins(n) == expected


def test_twin_count_below_threshold_is_brute():
    for n in range(1, 9):
        assert twin_count(n) == naive_twins(n)


def test_twin_count_equals_oracle_range():
    assert [twin_count(n) for n in range(1, 1500)] == [naive_twins(n) for n in range(1, 1500)]


def test_twin_count_overflow_guard():
    with pytest.raises(OverflowError):
        twin_count(2**63)


@pytest.mark.parametrize("n", [3, 4, 5, 100, 5000, 99_999])
def test_segmented_twin_count_small_segments(n, monkeypatch):
    monkeypatch.setattr(rs, "TWIN_SEGMENT", 7)
    assert brute_twin_count(n) == brute_twin_count_simple(n)


def test_segmented_twin_count_pi2_1e6():
    assert brute_twin_count(2 * rs.TWIN_SEGMENT) == brute_twin_count_simple(2 * rs.TWIN_SEGMENT)
    assert brute_twin_count(10**6) == 8169


@given(st.integers(9, 6000))
@settings(max_examples=150, deadline=None)
def test_survivors_are_prime(n):
    basis = rs.basis_for(n).primes
    nxt = rs.next_prime(max(basis))
    for k in survivors(n, basis).survivors:
        assert trial_prime(k)
        if k + 2 != nxt * nxt:
            assert trial_prime(k + 2)


@given(st.integers(1, 600), st.lists(st.sampled_from(FIRST6), unique=True, max_size=6))
@settings(max_examples=200, deadline=None)
def test_survivors_match_naive(n, basis):
    r = survivors(n, basis)
    assert list(r.survivors) == naive_survivors(n, basis)
    assert r.d0 == d0_count(n, basis) == sieve_count(n, basis)


@given(st.integers(1, 300), st.permutations(list(FIRST6[:4])))
@settings(max_examples=100, deadline=None)
def test_deletion_order_independent(n, order):
    z = list(range(1, n + 1))
    final = deletion_trace(z, [(p, r) for p in order for r in sorted(forbidden_residues(p))])[-1].remaining
    assert list(final) == naive_survivors(n, order)
    assert sequential_count(z, order) == len(final)


@given(st.integers(0, 300), st.integers(0, 300), st.sampled_from([2, 3, 5, 7, 11, 13, 17]))
@settings(max_examples=200, deadline=None)
def test_windowed_additivity(m1, m2, p):
    assert sieve_count(m1 + m2, (p,)) == sieve_count(m1, (p,)) + window_count(m1 + 1, m1 + m2, (p,))


@given(st.integers(0, 500), st.integers(0, 500), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_monotone(m, extra, p):
    assert sieve_count(m + extra, (p,)) >= sieve_count(m, (p,))


@given(st.integers(1, 200_000), st.lists(st.sampled_from((2, 3, 5, 7, 11, 13, 17, 19, 23)), unique=True, max_size=9))
@settings(max_examples=100, deadline=None)
def test_sieve_count_tables_match_direct(m, primes):
    assert sieve_count(m, primes) == d0_count(m, primes)
    assert sieve_count(m, primes, twin=False) == sequential_count(range(1, m + 1), primes, twin=False)


def test_prefix_counts():
    pre = survivor_prefix_counts(500, [2, 3, 5, 7])
    assert [int(pre[n]) for n in (1, 41, 500)] == [d0_count(n, [2, 3, 5, 7]) for n in (1, 41, 500)]


def test_zeros_first_trace_41():
    steps = deletion_trace(range(1, 42), zeros_first_order([2, 3, 5]))
    assert [(s.prime, s.residue) for s in steps] == [(2, 0), (3, 0), (5, 0), (3, 1), (5, 3)]
    assert steps[2].remaining == (1, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    assert steps[3].remaining == (11, 17, 23, 29, 41)
    assert steps[-1].remaining == (11, 17, 29, 41)


def test_sequential_count_large_values_use_mod_path():
    xs = [10**9 + k for k in range(100)]
    assert sequential_count(xs, (3, 5)) == set_sieve_count(xs, (3, 5))


def test_set_sieve_rejects_nonpositive():
    with pytest.raises(PreconditionError):
        set_sieve_count([0, 1], [3])
