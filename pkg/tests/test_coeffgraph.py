import itertools
import random

import pytest

from rho_lab.coeffgraph import (
    EnumerationLimit,
    HypothesisViolated,
    Move,
    closed_cycle_formula,
    coeff_step,
    count_closed_cycles_bruteforce,
    cycle_count_report,
    find_min_equidistribution_r,
    path_count_distribution,
    return_probability_bound_check,
    verify_equidistribution,
    walk_affine_form,
)
from rho_lab.group import multiplicative_order

ALL_MOVES = (Move.ADD_A, Move.ADD_B, Move.DOUBLE)


def apply_moves(a, b, moves, n):
    for m in moves:
        a, b = coeff_step(a, b, m, n)
    return a, b


def test_coeff_step_examples():
    assert coeff_step(0, 0, Move.ADD_A, 11) == (1, 0)
    assert coeff_step(0, 0, Move.ADD_B, 11) == (0, 1)
    assert coeff_step(6, 0, Move.DOUBLE, 11) == (1, 0)
    assert coeff_step(0, 0, Move.DOUBLE, 11) == (0, 0)


def test_affine_form_examples():
    af = walk_affine_form([Move.DOUBLE], 11)
    assert (af.s, af.u, af.v) == (1, 0, 0)
    af = walk_affine_form([Move.ADD_B, Move.DOUBLE], 11)
    assert (af.s, af.u, af.v) == (1, 0, 2)  # add then double
    af = walk_affine_form([Move.DOUBLE, Move.ADD_B], 11)
    assert (af.s, af.u, af.v) == (1, 0, 1)  # double then add


def test_affine_form_matches_pointwise_composition():
    rnd = random.Random(0)
    for _ in range(10_000):
        n = rnd.choice([3, 5, 7, 11, 13, 101])
        moves = [rnd.choice(ALL_MOVES) for _ in range(rnd.randrange(0, 12))]
        x0 = rnd.randrange(n)
        y0 = rnd.randrange(n)
        af = walk_affine_form(moves, n)
        assert af.apply(x0, y0, n) == apply_moves(x0, y0, moves, n)


def test_brute_force_examples():
    assert count_closed_cycles_bruteforce(11, 3) == 19
    assert count_closed_cycles_bruteforce(7, 3) == 67
    for n in (3, 11, 101):
        assert count_closed_cycles_bruteforce(n, 1) == 1


def test_brute_force_matches_trace_of_walk_counts():
    # independent cross-check: sum over all starts of the closed-walk
    # count from the path-count table must equal the enumeration total
    for n in (3, 5, 7, 11, 13):
        for r in range(1, 8):
            trace = 0
            for a0 in range(n):
                for b0 in range(n):
                    counts = path_count_distribution(n, (a0, b0), r)
                    trace += counts[a0 * n + b0]
            assert trace == count_closed_cycles_bruteforce(n, r), (n, r)


def test_brute_force_enumeration_cap():
    with pytest.raises(EnumerationLimit):
        count_closed_cycles_bruteforce(11, 18)
    with pytest.raises(ValueError):
        count_closed_cycles_bruteforce(11, 0)


def test_formula_examples():
    assert closed_cycle_formula(11, 3) == 19
    assert closed_cycle_formula(11, 1) == 1
    with pytest.raises(HypothesisViolated):
        closed_cycle_formula(7, 3)  # ord_7(2) = 3


def test_formula_agrees_with_enumeration_small_grid():
    # light version of the acceptance sweep
    for n in (3, 5, 7, 11, 13, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
        ord2 = multiplicative_order(2, n)
        for k in range(1, min(7, ord2 - 1) + 1):
            assert count_closed_cycles_bruteforce(n, k) == 3**k - 2**k, (n, k)


def test_cycle_count_report():
    rep = cycle_count_report(11, 3)
    assert rep.formula_count == rep.brute_count == 19
    assert rep.hypothesis_met and rep.ord2 == 10
    rep = cycle_count_report(7, 3, brute=False)
    assert rep.formula_count is None
    assert rep.brute_count == 67  # enumeration is forced when formula absent
    assert not rep.hypothesis_met
    rep = cycle_count_report(11, 3, brute=False)
    assert rep.brute_count is None and rep.formula_count == 19


def test_return_probability_bound():
    assert return_probability_bound_check(101, 5) is True
    assert return_probability_bound_check(11, 3) is True
    # outside the order hypothesis the bound genuinely fails
    assert return_probability_bound_check(7, 3, count=67) is False
    assert 67 > 3**3
    with pytest.raises(HypothesisViolated):
        return_probability_bound_check(7, 3)


def test_path_counts_single_step():
    counts = path_count_distribution(5, (0, 0), 1)
    expected = [0] * 25
    expected[0 * 5 + 0] = 1  # doubling fixes (0,0)
    expected[1 * 5 + 0] = 1
    expected[0 * 5 + 1] = 1
    assert counts == expected


def test_path_counts_r0_is_indicator():
    counts = path_count_distribution(7, (3, 4), 0)
    assert counts[3 * 7 + 4] == 1 and sum(counts) == 1


def test_path_counts_conservation():
    rnd = random.Random(4)
    for _ in range(10):
        n = rnd.choice([3, 5, 7, 11, 13])
        start = (rnd.randrange(n), rnd.randrange(n))
        r = rnd.randrange(0, 30)
        assert sum(path_count_distribution(n, start, r)) == 3**r


def test_path_counts_match_enumeration():
    for n, start, r in [(5, (0, 0), 4), (5, (1, 2), 4), (7, (6, 1), 5)]:
        counts = path_count_distribution(n, start, r)
        reference = [0] * (n * n)
        for seq in itertools.product(ALL_MOVES, repeat=r):
            a, b = apply_moves(start[0], start[1], seq, n)
            reference[a * n + b] += 1
        assert counts == reference


def test_equidistribution_fails_at_short_lengths():
    report = verify_equidistribution(3, 1)
    assert not report.passed
    assert report.min_ratio == 0.0  # most vertices unreachable in one step


# minimal window lengths, exact over every start vertex (frozen from the scan)
RSTAR = {3: 5, 5: 7, 7: 10, 11: 11, 13: 13}


@pytest.mark.parametrize("n", [3, 5, 11])
def test_find_min_equidistribution_r(n):
    report = find_min_equidistribution_r(n)
    assert report.r == RSTAR[n]
    assert report.passed
    assert 0.5 <= report.min_ratio <= report.max_ratio <= 1.5
    # minimality: the window must fail one step earlier
    assert not verify_equidistribution(n, report.r - 1).passed


def test_equidistribution_window_at_rstar():
    report = verify_equidistribution(11, RSTAR[11])
    assert report.passed
    assert report.min_ratio >= 0.5 and report.max_ratio <= 1.5
