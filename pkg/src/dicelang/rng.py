"""Injectable randomness sources.

Every roll draws a face *index* via ``next_index(n)`` so that face lists with
duplicate entries (fate dice) keep each physical side equiprobable.

The default seeded generator is CPython's Mersenne Twister
(``random.Random``).  Golden tests rely exclusively on :class:`ScriptedSource`
so they do not depend on any particular generator algorithm.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Iterable, Protocol, runtime_checkable

from .errors import ScriptExhausted


@runtime_checkable
class RandomSource(Protocol):
    def next_index(self, n: int) -> int:
        """Return a uniform integer in [0, n)."""
        ...


class SeededSource:
    """Deterministic PRNG-backed source; equal seeds give equal streams."""

    def __init__(self, seed: int | None = None):
        self.seed = seed
        self._random = random.Random(seed)

    def next_index(self, n: int) -> int:
        if n < 1:
            raise ValueError("next_index requires n >= 1")
        return self._random.randrange(n)


class ScriptedSource:
    """Replays a fixed queue of predetermined indices (test plumbing)."""

    def __init__(self, indices: Iterable[int]):
        self._queue = deque(indices)

    def next_index(self, n: int) -> int:
        if not self._queue:
            raise ScriptExhausted("scripted randomness source is exhausted")
        value = self._queue.popleft()
        if not 0 <= value < n:
            raise ValueError(
                f"scripted index {value} out of range for {n} faces")
        return value

    def __len__(self) -> int:
        return len(self._queue)


def seeded_source(seed: int | None = None) -> SeededSource:
    return SeededSource(seed)
