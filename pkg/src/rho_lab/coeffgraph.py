"""Exact combinatorics on the coefficient graph over (Z/nZ)^2.

The walk's coefficient pairs move along three directed edge types:
(a, b) -> (a+1, b), (a, b+1) or (2a, 2b).  Any composition of k moves is
the affine map (x, y) |-> 2^s (x, y) + (u, v), which makes closed walks
countable exactly: count fixed points of the map instead of iterating
all n^2 start vertices.

Everything here is exact integer arithmetic; path counts are bignums
summing to 3^r, never floats.
"""

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .group import multiplicative_order

__all__ = [
    "Move",
    "AffineForm",
    "CycleCountReport",
    "EquidistributionReport",
    "HypothesisViolated",
    "EnumerationLimit",
    "coeff_step",
    "walk_affine_form",
    "count_closed_cycles_bruteforce",
    "closed_cycle_formula",
    "cycle_count_report",
    "return_probability_bound_check",
    "path_count_distribution",
    "verify_equidistribution",
    "find_min_equidistribution_r",
]

MAX_ENUM_K = 17          # 3^17 ~ 1.3e8 move sequences; hard stop
MAX_DP_VERTICES = 10**6  # n^2 cap for the path-count table


class HypothesisViolated(ValueError):
    """k is not below the multiplicative order of 2 mod n; the closed-form
    count does not apply, use the brute-force enumeration instead."""


class EnumerationLimit(ValueError):
    """Requested enumeration exceeds the desk-scale cap."""


class Move(enum.Enum):
    ADD_A = "add_a"    # (a, b) -> (a+1, b)
    ADD_B = "add_b"    # (a, b) -> (a, b+1)
    DOUBLE = "double"  # (a, b) -> (2a, 2b)


@dataclass(frozen=True)
class AffineForm:
    """Composite of a move sequence: (x, y) |-> 2^s (x, y) + (u, v) mod n."""

    s: int
    u: int
    v: int

    def apply(self, x: int, y: int, n: int) -> tuple[int, int]:
        t = pow(2, self.s, n)
        return (t * x + self.u) % n, (t * y + self.v) % n


@dataclass(frozen=True)
class CycleCountReport:
    n: int
    k: int
    formula_count: int | None  # absent when k >= ord_n(2)
    brute_count: int | None    # absent when enumeration was not requested
    ord2: int
    hypothesis_met: bool


@dataclass(frozen=True)
class EquidistributionReport:
    n: int
    r: int
    min_ratio: float
    max_ratio: float
    passed: bool


def coeff_step(a: int, b: int, move: Move, n: int) -> tuple[int, int]:
    """Apply one edge of the coefficient graph, reduced mod n."""
    if move is Move.ADD_A:
        return (a + 1) % n, b % n
    if move is Move.ADD_B:
        return a % n, (b + 1) % n
    return 2 * a % n, 2 * b % n


def walk_affine_form(moves, n: int) -> AffineForm:
    """Compose a move sequence (applied left to right) into affine form."""
    s = 0
    u = 0
    v = 0
    for move in moves:
        if move is Move.ADD_A:
            u += 1
        elif move is Move.ADD_B:
            v += 1
        else:
            s += 1
            u *= 2
            v *= 2
    return AffineForm(s=s, u=u % n, v=v % n)


def _fixed_point_count(s: int, u: int, v: int, n: int, pow2) -> int:
    # 2^s != 1: (2^s - 1) x = -u has one solution per coordinate.
    # 2^s == 1 (including s = 0): the map is a translation by (u, v);
    # n^2 fixed points when (u, v) == (0, 0), none otherwise.
    if pow2[s] != 1:
        return 1
    if u % n == 0 and v % n == 0:
        return n * n
    return 0


def count_closed_cycles_bruteforce(n: int, k: int) -> int:
    """Total closed length-k walks, by enumerating all 3^k move sequences.

    Each sequence contributes the exact fixed-point count of its affine
    form.  u and v are accumulated as plain integers (they stay below
    2^k * k) and reduced mod n only at the leaf, keeping the inner loop
    cheap; O(3^k * k) overall.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > MAX_ENUM_K:
        raise EnumerationLimit(f"3^{k} move sequences exceed the enumeration cap")
    pow2 = [pow(2, s, n) for s in range(k + 1)]
    nn = n * n
    total = 0
    for seq in itertools.product((0, 1, 2), repeat=k):
        s = 0
        u = 0
        v = 0
        for m in seq:
            if m == 2:
                s += 1
                u <<= 1
                v <<= 1
            elif m == 0:
                u += 1
            else:
                v += 1
        if pow2[s] != 1:
            total += 1
        elif u % n == 0 and v % n == 0:
            total += nn
    return total


def closed_cycle_formula(n: int, k: int) -> int:
    """Closed length-k walk count 3^k - 2^k, valid for 1 <= k < ord_n(2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ord2 = multiplicative_order(2, n)
    if k >= ord2:
        raise HypothesisViolated(
            f"k={k} is not below ord_{n}(2)={ord2}; use the brute-force count")
    return 3**k - 2**k


def cycle_count_report(n: int, k: int, brute: bool = True) -> CycleCountReport:
    """Formula and (optionally) brute-force counts side by side.

    When the order hypothesis fails, the enumeration runs regardless of
    the brute flag; it is the only meaningful count there.
    """
    ord2 = multiplicative_order(2, n)
    hypothesis_met = 1 <= k < ord2
    formula = 3**k - 2**k if hypothesis_met else None
    brute_count = None
    if brute or not hypothesis_met:
        brute_count = count_closed_cycles_bruteforce(n, k)
    return CycleCountReport(n=n, k=k, formula_count=formula,
                            brute_count=brute_count, ord2=ord2,
                            hypothesis_met=hypothesis_met)


def return_probability_bound_check(n: int, k: int, count: int | None = None) -> bool:
    """Check that a uniform start plus uniform length-k move sequence
    returns to its start with probability at most 1/n^2.

    The return probability is (total fixed points over all sequences) /
    (3^k * n^2), so the bound is exactly count <= 3^k.  With count=None
    the closed-form count is used (k must satisfy the order hypothesis);
    pass an explicitly computed count to evaluate the bound outside it.
    """
    if count is None:
        count = closed_cycle_formula(n, k)
    return count <= 3**k


def path_count_distribution(n: int, start: tuple[int, int], r: int) -> list[int]:
    """Exact number of length-r walks from start to every vertex.

    Returns a row-major list of length n^2 (index a*n + b) of exact
    integers summing to 3^r.
    """
    if n * n > MAX_DP_VERTICES:
        raise EnumerationLimit(f"n^2 = {n * n} exceeds the path-count cap")
    if r < 0:
        raise ValueError("r must be >= 0")
    a0, b0 = start
    counts = [0] * (n * n)
    counts[(a0 % n) * n + (b0 % n)] = 1
    for _ in range(r):
        counts = _dp_step(counts, n)
    return counts


def _dp_step(counts: list[int], n: int) -> list[int]:
    new = [0] * (n * n)
    for idx, c in enumerate(counts):
        if not c:
            continue
        a, b = divmod(idx, n)
        new[((a + 1) % n) * n + b] += c
        new[a * n + (b + 1) % n] += c
        new[(2 * a % n) * n + (2 * b % n)] += c
    return new


def verify_equidistribution(n: int, r: int) -> EquidistributionReport:
    """Check the factor-of-two window on exact endpoint counts.

    For every start vertex and every end vertex, the number of length-r
    walks must lie in [1/2, 3/2] * 3^r / n^2.  The window test is exact
    integer arithmetic; the reported extreme ratios are floats for
    display.  Start vertices genuinely differ here (their exact count
    vectors are not translates of each other), so all n^2 starts are
    checked.
    """
    n2 = n * n
    p3 = 3**r
    lo_count = None
    hi_count = None
    for a0 in range(n):
        for b0 in range(n):
            counts = path_count_distribution(n, (a0, b0), r)
            mn = min(counts)
            mx = max(counts)
            lo_count = mn if lo_count is None else min(lo_count, mn)
            hi_count = mx if hi_count is None else max(hi_count, mx)
    passed = 2 * lo_count * n2 >= p3 and 2 * hi_count * n2 <= 3 * p3
    return EquidistributionReport(
        n=n, r=r,
        min_ratio=float(Fraction(lo_count * n2, p3)),
        max_ratio=float(Fraction(hi_count * n2, p3)),
        passed=passed,
    )


def find_min_equidistribution_r(n: int, r_max: int = 500) -> EquidistributionReport:
    """Smallest r <= r_max whose window check passes, by direct scan.

    Keeps one running count table per start vertex so the scan over r is
    a single forward sweep.  Raises ValueError if no r <= r_max passes.
    """
    n2 = n * n
    if n2 * n2 > MAX_DP_VERTICES * 100:
        raise EnumerationLimit(f"n^2 = {n2} start vertices exceed the scan cap")
    tables = []
    for a0 in range(n):
        for b0 in range(n):
            t = [0] * n2
            t[a0 * n + b0] = 1
            tables.append(t)
    p3 = 1
    for r in range(1, r_max + 1):
        p3 *= 3
        tables = [_dp_step(t, n) for t in tables]
        lo_count = min(min(t) for t in tables)
        hi_count = max(max(t) for t in tables)
        if 2 * lo_count * n2 >= p3 and 2 * hi_count * n2 <= 3 * p3:
            return EquidistributionReport(
                n=n, r=r,
                min_ratio=float(Fraction(lo_count * n2, p3)),
                max_ratio=float(Fraction(hi_count * n2, p3)),
                passed=True,
            )
    raise ValueError(f"no r <= {r_max} puts all endpoint counts in the window for n={n}")
