"""Deterministic random streams for reproducible parallel generation.

Built on the Philox counter-based bit generator: the 128-bit key is the
(seed, stream) pair, so any worker can open stream ``i`` directly without
coordinating with the others, and identical (seed, stream) pairs replay
identical byte sequences on every platform.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


class RngState:
    """One named random stream. Not shared between workers; cheap to create."""

    __slots__ = ("seed", "stream", "gen")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self.gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, stream={self.stream})"
