"""Counter-based random streams and exact categorical sampling.

Streams are Philox 4x64 generators keyed by a 64-bit seed, with the
counter laid out as (0, 0, stream_id, trial).  The stream id is the
CRC-32 of a context string, so any consumer can reconstruct a stream
bit-exactly from (seed, context, trial) without shared state.

Categorical draws map uniform 64-bit integers through exact cumulative
thresholds floor(cum_weight * 2^64), so the sampling distribution is
within 2^-64 of the rational weights per atom and identical across
platforms.
"""
from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

_TWO64 = 1 << 64


def stream_id(context: str) -> int:
    """Stable 32-bit stream identifier for a context string."""
    return zlib.crc32(context.encode("utf-8"))


def make_generator(seed: int, context: str, trial: int = 0) -> np.random.Generator:
    """Independent generator for (seed, context, trial)."""
    if not (0 <= trial < _TWO64):
        raise ValueError(f"trial index out of range: {trial}")
    bitgen = np.random.Philox(
        counter=[0, 0, stream_id(context), trial],
        key=[int(seed) % _TWO64, 0],
    )
    return np.random.Generator(bitgen)


class CategoricalSampler:
    """Draws indices with exact rational probabilities.

    Atoms with zero weight are excluded up front; the thresholds are the
    cumulative weights scaled to 64 bits, with the final (full) threshold
    dropped so every uint64 draw lands in some bucket.
    """

    def __init__(self, weights):
        items = [(i, Fraction(w)) for i, w in enumerate(weights) if w > 0]
        if not items:
            raise ValueError("categorical sampler needs positive total weight")
        total = sum(w for _, w in items)
        if total != 1:
            raise ValueError(f"weights must sum to 1, got {total}")
        self.indices = np.array([i for i, _ in items], dtype=np.int64)
        cum = Fraction(0)
        thresholds = []
        for _, w in items[:-1]:
            cum += w
            thresholds.append((cum * _TWO64).__floor__())
        self.thresholds = np.array(thresholds, dtype=np.uint64)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        draws = gen.integers(0, _TWO64, size=size, dtype=np.uint64)
        buckets = np.searchsorted(self.thresholds, draws, side="right")
        return self.indices[buckets]
