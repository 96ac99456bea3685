"""Deterministic RNG substream derivation.

Every randomized operation in the package takes an integer seed and derives
per-round / per-sample substreams from it, so runs are reproducible across
processes (the two prover servers must derive identical per-round labellings
from a shared seed without talking to each other).
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts: object) -> int:
    """Hash an arbitrary label tuple down to a 64-bit stream seed."""
    text = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(*parts: object) -> random.Random:
    """A fresh `random.Random` seeded from the label tuple."""
    return random.Random(derive_seed(*parts))
