"""Seed derivation shared by every randomized routine.

Streams are keyed by tuples such as ``(master_seed, name_hash, f, trial)`` and
folded through SplitMix64, so a result never depends on evaluation order.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def name_hash(name: str) -> int:
    """Stable 64-bit hash of a string (Python's ``hash`` is salted per process)."""
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest(), "little")


def derive_seed(*parts: int) -> int:
    state = 0
    for part in parts:
        state = splitmix64(state ^ (part & MASK64))
    return state
