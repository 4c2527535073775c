"""
seeding.py
Labeled random sub-streams derived from one 64-bit master seed.

Every stochastic operation asks for its own stream by label, so adding a new
noise source or experiment cell never shifts the numbers drawn elsewhere.
"""

import hashlib
from typing import Union

import numpy as np

Label = Union[str, int, float]


def _label_words(label: Label) -> list[int]:
    digest = hashlib.sha256(repr(label).encode("utf-8")).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]


def derive_seed_sequence(master_seed: int, *labels: Label) -> np.random.SeedSequence:
    entropy = [master_seed & 0xFFFFFFFF, (master_seed >> 32) & 0xFFFFFFFF]
    for label in labels:
        entropy.extend(_label_words(label))
    return np.random.SeedSequence(entropy)


def derive_rng(master_seed: int, *labels: Label) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(master_seed, *labels))


def derive_seed(master_seed: int, *labels: Label) -> int:
    """A child 64-bit seed, for APIs that take a plain integer seed."""
    state = derive_seed_sequence(master_seed, *labels).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
