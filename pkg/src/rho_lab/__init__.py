"""Discrete-log walk laboratory.

A library and CLI for the low-memory collision walk on prime-order
groups, with exact combinatorics and spectral estimates for the walk's
coefficient graph: closed-walk counts, endpoint equidistribution
windows, gap constants, and a census of primes where 2 has small
multiplicative order.
"""

from .group import GroupParams, find_ambient_prime, group_op, group_pow, is_prime, \
    mod_inverse, multiplicative_order
from .partition import PartitionKey, SectorLabel, classify, encode_element
from .walk import CollisionMode, CollisionRecord, RhoInstance, WalkState, bsgs_oracle, \
    extract_dlog, random_start, run_until_collision, solve, step
from .coeffgraph import AffineForm, CycleCountReport, Move, closed_cycle_formula, \
    coeff_step, count_closed_cycles_bruteforce, cycle_count_report, \
    find_min_equidistribution_r, path_count_distribution, \
    return_probability_bound_check, verify_equidistribution, walk_affine_form
from .spectral import GapSummary, SpectralReport, a2_norm_dense, a2_norm_estimate, \
    char_multiplier, cosine_form_max, doubling_form_max, fit_gap_constants, mu
from .primes import AlternateExponent, BadPrimeReport, bad_prime_census, \
    primes_in_range, select_alternate_exponent
from .harness import ExperimentConfig, ExperimentReport, emit_report, \
    parse_config_file, run_experiment

__version__ = "0.1.0"
