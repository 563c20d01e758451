"""Arithmetic for a cyclic group of odd prime order n.

The group is realized as the order-n subgroup of the units modulo an
ambient prime p with n | p-1.  All arithmetic uses Python's unbounded
integers, so moduli up to desk scale (~2^60) work unchanged.
"""

from dataclasses import dataclass

__all__ = [
    "GroupParams",
    "AmbientPrimeSearchError",
    "NonInvertibleError",
    "is_prime",
    "find_ambient_prime",
    "group_pow",
    "group_op",
    "mod_inverse",
    "multiplicative_order",
    "factorize",
]

# Witness set making Miller-Rabin deterministic for all inputs below
# 3.3 * 10^24 (covers 64-bit operands with a wide margin).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_DIVISION_BOUND = 10**6


class AmbientPrimeSearchError(ValueError):
    """No ambient prime p = k*n + 1 found within the search cap."""


class NonInvertibleError(ValueError):
    """Residue has no multiplicative inverse for the given modulus."""


def is_prime(x: int) -> bool:
    """Deterministic Miller-Rabin primality check (valid below ~3.3e24)."""
    if x < 2:
        return False
    for p in _MR_WITNESSES:
        if x % p == 0:
            return x == p
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        v = pow(a, d, x)
        if v == 1 or v == x - 1:
            continue
        for _ in range(r - 1):
            v = v * v % x
            if v == x - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GroupParams:
    """Cyclic group of odd prime order n inside the units mod p.

    n: prime order of the subgroup
    p: ambient prime with n | p-1
    g: generator of the order-n subgroup, g != 1
    """

    n: int
    p: int
    g: int

    def __post_init__(self):
        if not is_prime(self.n):
            raise ValueError(f"group order {self.n} is not prime")
        if self.n % 2 == 0:
            raise ValueError("group order must be odd (2 must be invertible mod n)")
        if not is_prime(self.p):
            raise ValueError(f"ambient modulus {self.p} is not prime")
        if (self.p - 1) % self.n != 0:
            raise ValueError(f"n={self.n} does not divide p-1={self.p - 1}")
        if not 2 <= self.g <= self.p - 1:
            raise ValueError(f"generator {self.g} out of range [2, p-1]")
        if pow(self.g, self.n, self.p) != 1:
            raise ValueError(f"generator {self.g} does not have order dividing {self.n}")


def find_ambient_prime(n: int, max_k: int = 10**6) -> GroupParams:
    """Realize the order-n group inside the units modulo the smallest
    prime p = k*n + 1 with k >= 2.

    The generator is w^((p-1)/n) mod p for the smallest w >= 2 that gives
    a value != 1.  Raises AmbientPrimeSearchError if no prime turns up
    for k <= max_k.
    """
    if not is_prime(n):
        raise ValueError(f"{n} is not prime")
    if n % 2 == 0:
        raise ValueError("n must be odd")
    for k in range(2, max_k + 1):
        p = k * n + 1
        if not is_prime(p):
            continue
        cofactor = (p - 1) // n
        w = 2
        while True:
            g = pow(w, cofactor, p)
            if g != 1:
                return GroupParams(n=n, p=p, g=g)
            w += 1
    raise AmbientPrimeSearchError(f"no prime k*{n}+1 with 2 <= k <= {max_k}")


def group_pow(base: int, e: int, params: GroupParams) -> int:
    """base^e mod p (square-and-multiply via the built-in pow)."""
    if not 1 <= base <= params.p - 1:
        raise ValueError(f"base {base} outside [1, p-1]")
    return pow(base, e, params.p)


def group_op(x: int, y: int, params: GroupParams) -> int:
    """Product x*y mod p."""
    if not 1 <= x <= params.p - 1 or not 1 <= y <= params.p - 1:
        raise ValueError("operands must lie in [1, p-1]")
    return x * y % params.p


def mod_inverse(a: int, n: int) -> int:
    """Inverse of a mod n for prime n; raises NonInvertibleError on a == 0."""
    a %= n
    if a == 0:
        raise NonInvertibleError(f"0 is not invertible mod {n}")
    return pow(a, -1, n)


def _pollard_rho_factor(m: int) -> int:
    """One nontrivial factor of composite m (Brent's cycle variant)."""
    if m % 2 == 0:
        return 2
    import math

    for c in range(1, 100):
        x = 2
        y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % m
            y = (y * y + c) % m
            y = (y * y + c) % m
            d = math.gcd(abs(x - y), m)
        if d != m:
            return d
    raise ArithmeticError(f"failed to factor {m}")


def factorize(m: int) -> dict[int, int]:
    """Prime factorization {prime: exponent}; trial division up to 10^6,
    then Pollard-rho splitting for any remaining composite cofactor."""
    if m < 1:
        raise ValueError("m must be >= 1")
    factors: dict[int, int] = {}
    d = 2
    while d <= _TRIAL_DIVISION_BOUND and d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    stack = [m] if m > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            factors[v] = factors.get(v, 0) + 1
            continue
        f = _pollard_rho_factor(v)
        stack.append(f)
        stack.append(v // f)
    return factors


def multiplicative_order(a: int, m: int) -> int:
    """Least k >= 1 with a^k = 1 mod m, for prime m and gcd(a, m) = 1.

    Starts from the group order m-1 and strips prime factors while the
    power stays 1.
    """
    a %= m
    if a == 0:
        raise ValueError(f"{a} is not a unit mod {m}")
    order = m - 1
    for q in factorize(m - 1):
        while order % q == 0 and pow(a, order // q, m) == 1:
            order //= q
    return order
