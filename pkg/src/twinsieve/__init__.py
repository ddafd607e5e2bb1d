"""Exact twin-prime sieve toolkit.

Three independent twin-pair counting engines (brute-force sieve, residue
sieve with D0 + D(sqrt n) - D1 assembly, inclusion-exclusion expansion), an
instance-level checker for the sieve identities and lemmas, and exact
rational evaluation of the W(V) / D'(n) lower-bound sequence.
"""
from .bounds import BoundsRow, d_prime, figure_table, lower_bound_d, w_growth_check, w_sequence, w_value
from .errors import CapacityError, PreconditionError
from .inclusion_exclusion import IETerm, crt_first_position, d0_via_ie, expand, term_value
from .lemma_checks import CheckResult, Grid, IdentityId, ScanReport, check_identity, default_grid, scan_grid
from .prime_basis import PrimeList, basis_for, is_prime, legendre_pi, prime_pi, primes_up_to
from .residue_sieve import (
    ResidueBasis,
    SurvivorReport,
    brute_twin_count,
    d1_correction,
    forbidden_residues,
    set_sieve_count,
    survivors,
    twin_count,
)

__version__ = "0.1.0"
