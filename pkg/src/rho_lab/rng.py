"""Deterministic randomness derived from a 64-bit master seed.

Every random quantity in the library (walk start exponents, partition
keys, per-trial sub-seeds) is a pure function of (seed, label), produced
by running SHA-256 in counter mode over seed || label || counter.  This
makes whole experiments bit-exact across platforms, process counts and
replays: same seed, same label, same bytes.
"""

import hashlib

__all__ = ["derive_bytes", "derive_u64", "uniform_below"]

_U64 = (1 << 64) - 1


def _prefix(seed: int, label: str) -> bytes:
    return (seed & _U64).to_bytes(8, "big") + label.encode("utf-8")


def derive_bytes(seed: int, label: str, length: int = 32) -> bytes:
    """Deterministic byte string of the given length for (seed, label)."""
    prefix = _prefix(seed, label)
    out = b""
    counter = 0
    while len(out) < length:
        out += hashlib.sha256(prefix + counter.to_bytes(8, "big")).digest()
        counter += 1
    return out[:length]


def derive_u64(seed: int, label: str) -> int:
    """Deterministic 64-bit sub-seed for (seed, label)."""
    return int.from_bytes(derive_bytes(seed, label, 8), "big")


def uniform_below(seed: int, label: str, bound: int) -> int:
    """Deterministic uniform integer in [0, bound).

    Rejection-samples 256-bit draws so the result is exactly uniform, not
    merely uniform up to a 2^-256 modular bias.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    prefix = _prefix(seed, label)
    limit = bound * ((1 << 256) // bound)
    counter = 0
    while True:
        v = int.from_bytes(hashlib.sha256(prefix + counter.to_bytes(8, "big")).digest(), "big")
        if v < limit:
            return v % bound
        counter += 1
