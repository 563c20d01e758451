"""The low-memory discrete-log walk with exponent tracking.

A walk state carries the group element x together with coefficients
(a, b) mod n such that x = g^(a*y + b) whenever h = g^y.  One step either
multiplies by g (b += 1), multiplies by h (a += 1), or raises to the
configured prime power ell (a, b scale by ell; ell = 2 is the classic
squaring step).  A collision x_k = x_l with unequal coefficient pairs
yields y = (b_l - b_k) / (a_k - a_l) mod n.
"""

import enum
import math
import warnings
from dataclasses import dataclass, replace

from . import rng
from .group import GroupParams, group_pow, is_prime, mod_inverse
from .partition import PartitionKey, SectorLabel, classify, encode_element, sector_index

__all__ = [
    "CollisionMode",
    "RhoInstance",
    "WalkState",
    "CollisionRecord",
    "CollisionTimeout",
    "RestartsExhausted",
    "CollisionContradiction",
    "random_start",
    "step",
    "run_until_collision",
    "extract_dlog",
    "solve",
    "bsgs_oracle",
]


class CollisionMode(enum.Enum):
    FULL_STORE = "fullstore"  # hash every visited element; first collision
    FLOYD = "floyd"           # tortoise-hare; some collision, O(1) memory


class CollisionTimeout(RuntimeError):
    """No collision within the step budget."""

    def __init__(self, steps: int):
        super().__init__(f"no collision within {steps} steps")
        self.steps = steps


class RestartsExhausted(RuntimeError):
    """Every allowed randomization attempt ended degenerate."""


class CollisionContradiction(RuntimeError):
    """Colliding elements with a_k = a_l but b_k != b_l; impossible when
    x = g^(a*y+b) holds in a faithful group, so this signals a bug."""


@dataclass(frozen=True)
class RhoInstance:
    """One solver run: group, target, partition key, power step, seed."""

    params: GroupParams
    g: int
    h: int
    key: PartitionKey
    exponent_step: int = 2
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.h <= self.params.p - 1:
            raise ValueError("target h outside [1, p-1]")
        if not 2 <= self.exponent_step < self.params.n:
            raise ValueError("exponent step must satisfy 2 <= ell < n")
        if not is_prime(self.exponent_step):
            raise ValueError("exponent step must be prime")

    @classmethod
    def from_seed(cls, params: GroupParams, g: int, h: int, seed: int,
                  exponent_step: int = 2) -> "RhoInstance":
        """Instance whose partition key is derived from the seed."""
        key = PartitionKey(rng.derive_bytes(seed, "partition-key/0"))
        return cls(params=params, g=g, h=h, key=key,
                   exponent_step=exponent_step, seed=seed)


@dataclass
class WalkState:
    x: int
    a: int
    b: int
    step_index: int = 0


@dataclass(frozen=True)
class CollisionRecord:
    """Colliding indices k < l_idx with their coefficient pairs.

    degenerate is True exactly when the coefficient pairs coincide;
    recovered_y is present exactly when they do not.
    """

    k: int
    l_idx: int
    coeffs_k: tuple[int, int]
    coeffs_l: tuple[int, int]
    degenerate: bool
    recovered_y: int | None = None


def random_start(instance: RhoInstance) -> WalkState:
    """Start at x0 = g^r1 * h^r2 with r1, r2 seeded uniform in [0, n-1].

    The coefficients are (a0, b0) = (r2, r1) so that x0 = g^(a0*y + b0).
    """
    n = instance.params.n
    r1 = rng.uniform_below(instance.seed, "start-r1", n)
    r2 = rng.uniform_below(instance.seed, "start-r2", n)
    x0 = group_pow(instance.g, r1, instance.params) * \
        group_pow(instance.h, r2, instance.params) % instance.params.p
    return WalkState(x=x0, a=r2, b=r1, step_index=0)


def step(state: WalkState, instance: RhoInstance) -> WalkState:
    """One iteration of the walk map, keeping coefficients in sync."""
    n = instance.params.n
    p = instance.params.p
    ell = instance.exponent_step
    label = classify(state.x, instance.key, instance.params)
    if label is SectorLabel.S1:
        x = state.x * instance.g % p
        a, b = state.a, (state.b + 1) % n
    elif label is SectorLabel.S2:
        x = state.x * instance.h % p
        a, b = (state.a + 1) % n, state.b
    else:
        x = pow(state.x, ell, p)
        a, b = state.a * ell % n, state.b * ell % n
    return WalkState(x=x, a=a, b=b, step_index=state.step_index + 1)


def _advance(x: int, a: int, b: int, g: int, h: int, p: int, n: int,
             ell: int, key: bytes, width: int) -> tuple[int, int, int]:
    """step() with the classification inlined, for the hot loops."""
    s = sector_index(x.to_bytes(width, "big"), key)
    if s == 0:
        return x * g % p, a, (b + 1) % n
    if s == 1:
        return x * h % p, (a + 1) % n, b
    return pow(x, ell, p), a * ell % n, b * ell % n


def run_until_collision(instance: RhoInstance,
                        mode: CollisionMode = CollisionMode.FULL_STORE,
                        max_steps: int = 1_000_000) -> CollisionRecord:
    """Iterate from the seeded start until two step indices share an x.

    FULL_STORE keeps every visited element in a hash table keyed by its
    canonical encoding and returns the first collision.  FLOYD runs
    tortoise and hare and returns the meeting pair (a valid but not
    necessarily first collision).  Raises CollisionTimeout past the
    step budget.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    params = instance.params
    p, n = params.p, params.n
    g, h, ell = instance.g, instance.h, instance.exponent_step
    key = instance.key.key
    width = (p.bit_length() + 7) // 8

    start = random_start(instance)
    x, a, b = start.x, start.a, start.b

    if mode is CollisionMode.FULL_STORE:
        seen = {encode_element(x, params): (0, a, b)}
        for i in range(1, max_steps + 1):
            x, a, b = _advance(x, a, b, g, h, p, n, ell, key, width)
            enc = x.to_bytes(width, "big")
            prev = seen.get(enc)
            if prev is not None:
                k, ak, bk = prev
                return _record(k, i, (ak, bk), (a, b), n)
            seen[enc] = (i, a, b)
        raise CollisionTimeout(max_steps)

    # Floyd: tortoise one step per round, hare two; indices (i, 2i) meet.
    tx, ta, tb = x, a, b
    hx, ha, hb = x, a, b
    for i in range(1, max_steps + 1):
        tx, ta, tb = _advance(tx, ta, tb, g, h, p, n, ell, key, width)
        hx, ha, hb = _advance(hx, ha, hb, g, h, p, n, ell, key, width)
        hx, ha, hb = _advance(hx, ha, hb, g, h, p, n, ell, key, width)
        if tx == hx:
            return _record(i, 2 * i, (ta, tb), (ha, hb), n)
    raise CollisionTimeout(max_steps)


def _record(k: int, l_idx: int, coeffs_k: tuple[int, int],
            coeffs_l: tuple[int, int], n: int) -> CollisionRecord:
    degenerate = coeffs_k == coeffs_l
    record = CollisionRecord(k=k, l_idx=l_idx, coeffs_k=coeffs_k,
                             coeffs_l=coeffs_l, degenerate=degenerate)
    if not degenerate:
        record = replace(record, recovered_y=extract_dlog(record, n))
    return record


def extract_dlog(record: CollisionRecord, n: int) -> int | None:
    """y = (b_l - b_k) / (a_k - a_l) mod n, or None when degenerate."""
    ak, bk = record.coeffs_k
    al, bl = record.coeffs_l
    if (ak - al) % n == 0:
        if (bk - bl) % n == 0:
            return None
        raise CollisionContradiction(
            f"a_k = a_l but b_k != b_l at indices ({record.k}, {record.l_idx})")
    return (bl - bk) * mod_inverse(ak - al, n) % n


def solve(instance: RhoInstance, max_restarts: int = 20,
          max_steps: int = 1_000_000,
          mode: CollisionMode = CollisionMode.FULL_STORE) -> int:
    """Run collisions until one is nondegenerate and return the verified y.

    A degenerate collision triggers full re-randomization: a fresh
    partition key and a fresh start, both derived from the instance seed
    and the attempt number.  Raises RestartsExhausted past the budget.
    """
    params = instance.params
    if instance.h == 1:
        warnings.warn("target h = 1 is the identity; returning y = 0")
        return 0
    for attempt in range(max_restarts + 1):
        if attempt == 0:
            inst = instance
        else:
            inst = replace(
                instance,
                key=PartitionKey(rng.derive_bytes(instance.seed, f"partition-key/{attempt}")),
                seed=rng.derive_u64(instance.seed, f"start-seed/{attempt}"),
            )
        record = run_until_collision(inst, mode=mode, max_steps=max_steps)
        if record.degenerate:
            continue
        y = record.recovered_y
        if group_pow(instance.g, y, params) != instance.h:
            raise CollisionContradiction(
                f"extracted y={y} fails verification g^y = h")
        return y
    raise RestartsExhausted(f"{max_restarts + 1} attempts all ended degenerate")


def bsgs_oracle(g: int, h: int, params: GroupParams) -> int:
    """Baby-step giant-step discrete log: exact y with g^y = h.

    O(sqrt(n)) time and memory; independent of the walk machinery, used
    as the correctness oracle.  Raises ValueError when h lies outside
    the subgroup generated by g.
    """
    n, p = params.n, params.p
    if not 1 <= h <= p - 1:
        raise ValueError("h outside [1, p-1]")
    m = math.isqrt(n) + 1
    baby = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * g % p
    giant = pow(cur, -1, p)  # cur == g^m here
    gamma = h
    for i in range(m + 1):
        j = baby.get(gamma)
        if j is not None:
            return (i * m + j) % n
        gamma = gamma * giant % p
    raise ValueError("h is not in the subgroup generated by g")
