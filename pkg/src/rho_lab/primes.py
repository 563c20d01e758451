"""Prime enumeration, the small-order-of-2 census, and power-step selection.

Primes p whose multiplicative order of 2 falls below c (log X)^3 are the
ones where the squaring-step analysis degrades.  The census scans a
dyadic interval [X, 2X], collects those primes together with their
orders, and checks the exact counting bound (c^2 log 2 / 2)(log X)^5.
All logarithms are natural.
"""

import math
from dataclasses import dataclass

from .group import is_prime, multiplicative_order

__all__ = [
    "BadPrimeReport",
    "AlternateExponent",
    "RangeCapExceeded",
    "CensusBoundViolation",
    "ThresholdUnsatisfiable",
    "primes_in_range",
    "bad_prime_census",
    "select_alternate_exponent",
]

RANGE_CAP = 10**9


class RangeCapExceeded(ValueError):
    """Sieve range beyond the desk-scale cap."""


class CensusBoundViolation(RuntimeError):
    """Census count exceeded its proven bound; fatal diagnostic."""


class ThresholdUnsatisfiable(ValueError):
    """Order threshold exceeds n-1, which no element can meet."""


@dataclass(frozen=True)
class BadPrimeReport:
    """Primes in [X, 2X] whose order of 2 is at most c (log X)^3."""

    x: float
    c: float
    threshold: float
    bad_primes: list  # (p, ord_p(2)) pairs, ascending in p
    count: int
    bound: float


@dataclass(frozen=True)
class AlternateExponent:
    """Power step ell with ord_n(ell) at least the mixing threshold."""

    ell: int
    order: int
    threshold: float


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes in [lo, hi], ascending, by segmented sieve."""
    if lo < 2:
        lo = 2
    if hi > RANGE_CAP:
        raise RangeCapExceeded(f"hi={hi} exceeds the cap {RANGE_CAP}")
    if hi < lo:
        return []
    root = math.isqrt(hi)
    base = _small_primes(root)
    span = hi - lo + 1
    composite = bytearray(span)
    for p in base:
        start = max(p * p, (lo + p - 1) // p * p)
        for j in range(start - lo, span, p):
            composite[j] = 1
    return [lo + i for i in range(span) if not composite[i] and lo + i >= 2]


def _small_primes(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = bytearray(limit + 1)
    out = []
    for i in range(2, limit + 1):
        if not sieve[i]:
            out.append(i)
            for j in range(i * i, limit + 1, i):
                sieve[j] = 1
    return out


def bad_prime_census(x: float, c: float) -> BadPrimeReport:
    """Scan primes in [X, 2X] for multiplicative order of 2 at most
    c (log X)^3, and check the count against (c^2 log 2 / 2)(log X)^5.

    A count above the bound would falsify proven arithmetic and raises
    CensusBoundViolation rather than returning.
    """
    if x < 10:
        raise ValueError("X must be >= 10")
    threshold = c * math.log(x) ** 3
    bound = (c * c * math.log(2) / 2.0) * math.log(x) ** 5
    bad = []
    for p in primes_in_range(math.ceil(x), math.floor(2 * x)):
        if p == 2:
            continue
        order = multiplicative_order(2, p)
        if order <= threshold:
            bad.append((p, order))
    if len(bad) > bound:
        raise CensusBoundViolation(
            f"census found {len(bad)} primes in [{x}, {2 * x}] with small order "
            f"of 2, above the bound {bound:.3f}")
    return BadPrimeReport(x=x, c=c, threshold=threshold, bad_primes=bad,
                          count=len(bad), bound=bound)


def select_alternate_exponent(n: int, c0: float = 1.0) -> AlternateExponent:
    """Smallest prime ell != n with ord_n(ell) >= c0 (log n)^3.

    When the threshold exceeds n-1 no element can satisfy it and
    ThresholdUnsatisfiable is raised.
    """
    if not is_prime(n) or n % 2 == 0:
        raise ValueError("n must be an odd prime")
    threshold = c0 * math.log(n) ** 3
    if threshold > n - 1:
        raise ThresholdUnsatisfiable(
            f"threshold {threshold:.2f} exceeds n-1 = {n - 1}")
    ell = 2
    while True:
        if ell != n:
            order = multiplicative_order(ell, n)
            if order >= threshold:
                return AlternateExponent(ell=ell, order=order, threshold=threshold)
        ell = _next_prime(ell)


def _next_prime(p: int) -> int:
    q = p + 1
    while not is_prime(q):
        q += 1
    return q
