"""Deterministic RNG streams derived from a campaign seed.

Streams are independent of PYTHONHASHSEED and of each other: each
(seed, label...) tuple is hashed to a 64-bit value that seeds a fresh
random.Random.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, *parts: object) -> int:
    """64-bit sub-seed for the stream identified by ``parts``."""
    key = ":".join([str(seed), *(str(p) for p in parts)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(seed: int, *parts: object) -> random.Random:
    """Fresh Random for the stream identified by ``parts``."""
    return random.Random(derive_seed(seed, *parts))
