"""Named random streams derived from one 64-bit seed.

Each stage asks for ``stream(seed, "stage", ...)``; adding a stage never shifts
the draws of another one.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *names) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed & MASK64).to_bytes(8, "little"))
    for name in names:
        h.update(b"\x00")
        h.update(str(name).encode())
    return int.from_bytes(h.digest(), "little")


def stream(seed: int, *names) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *names))
