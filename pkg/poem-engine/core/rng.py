"""Seeded random number generator for reproducible poems."""

import random
import secrets
from typing import Sequence, TypeVar

T = TypeVar("T")


def entropy_seed() -> int:
    """Draw a fresh 32-bit seed from the operating system."""
    return secrets.randbits(32)


class SeededRNG:
    """
    Wrapper around random.Random with a pinned set of draws.

    Only `randbelow` touches the generator; `choice` is defined on top of it
    so the consumption sequence of a run is exactly one draw per call.
    """

    def __init__(self, seed: int):
        self._seed = seed
        self._rng = random.Random(seed)
        self.draws = 0

    @property
    def seed(self) -> int:
        return self._seed

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError(f"randbelow needs a positive bound, got {n}")
        self.draws += 1
        return self._rng.randrange(n)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise IndexError("cannot choose from an empty sequence")
        return seq[self.randbelow(len(seq))]
