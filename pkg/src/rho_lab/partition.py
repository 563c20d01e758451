"""Keyed pseudorandom 3-way partition of the group elements.

Each element is assigned one of three sector labels by hashing a 32-byte
key together with the element's canonical encoding.  The digest is
rejection-sampled mod 3, so the label distribution is exactly uniform
over the hash output space rather than uniform up to a 2^-256 bias.
"""

import enum
import hashlib
from dataclasses import dataclass

from .group import GroupParams

__all__ = ["PartitionKey", "SectorLabel", "encode_element", "classify"]

KEY_BYTES = 32

# Largest multiple of 3 representable in 256 bits; digests at or above
# this value are rejected and rehashed.
REJECTION_LIMIT = 3 * ((1 << 256) // 3)


class SectorLabel(enum.Enum):
    S1 = 0  # multiply by g
    S2 = 1  # multiply by h
    S3 = 2  # power step


@dataclass(frozen=True)
class PartitionKey:
    """32-byte key fixing one random partition for the lifetime of a run."""

    key: bytes

    def __post_init__(self):
        if len(self.key) != KEY_BYTES:
            raise ValueError(f"partition key must be {KEY_BYTES} bytes, got {len(self.key)}")


def encode_element(x: int, params: GroupParams) -> bytes:
    """Canonical fixed-width big-endian encoding; width = byte length of p."""
    if not 1 <= x <= params.p - 1:
        raise ValueError(f"element {x} outside [1, p-1]")
    width = (params.p.bit_length() + 7) // 8
    return x.to_bytes(width, "big")


def sector_index(encoded: bytes, key: bytes) -> int:
    """Uniform value in {0, 1, 2} for a keyed element encoding.

    Rejected digests are rehashed with an appended counter byte, so the
    procedure is deterministic and bias-free.
    """
    digest = hashlib.sha256(key + encoded).digest()
    value = int.from_bytes(digest, "big")
    counter = 0
    while value >= REJECTION_LIMIT:
        counter += 1
        digest = hashlib.sha256(key + encoded + counter.to_bytes(1, "big")).digest()
        value = int.from_bytes(digest, "big")
    return value % 3


def classify(x: int, key: PartitionKey, params: GroupParams) -> SectorLabel:
    """Deterministic sector label for a group element under a fixed key."""
    return SectorLabel(sector_index(encode_element(x, params), key.key))
