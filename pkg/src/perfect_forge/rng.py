"""SplitMix64 streams with counter-addressable outputs.

The k-th output (k = 0, 1, ...) of the stream seeded with ``s`` is
``mix64(s + (k + 1) * GOLDEN)`` taken mod 2**64.  Because every output is a
pure function of ``(seed, k)``, substreams for parallel trials are derived as
``substream(seed, trial)`` and results never depend on scheduling.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_value(seed: int, k: int) -> int:
    return mix64(seed + (k + 1) * GOLDEN)


def substream(seed: int, index: int) -> int:
    """Seed of the ``index``-th independent child stream."""
    return stream_value(seed, index)


def stream_values(seeds, counters) -> np.ndarray:
    """Vectorised ``stream_value`` with numpy broadcasting (uint64 result)."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = seeds + (counters + np.uint64(1)) * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential view of a stream: ``next()`` returns outputs 0, 1, 2, ..."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next(self) -> int:
        v = stream_value(self.seed, self.counter)
        self.counter += 1
        return v

    def below(self, bound: int) -> int:
        return self.next() % bound

    def block(self, shape, bound: int) -> np.ndarray:
        """Next ``prod(shape)`` outputs reduced mod ``bound``, in C order."""
        size = int(np.prod(shape))
        ks = np.arange(self.counter, self.counter + size, dtype=np.uint64)
        self.counter += size
        return (stream_values(self.seed, ks) % np.uint64(bound)).reshape(shape)


def random_words(seed: int, trials, n: int, q: int) -> np.ndarray:
    """Row t holds n symbols drawn from substream ``substream(seed, trials[t])``."""
    trials = np.asarray(trials, dtype=np.uint64)
    child = stream_values(np.uint64(seed & MASK64), trials)
    vals = stream_values(child[:, None], np.arange(n, dtype=np.uint64)[None, :])
    return (vals % np.uint64(q)).astype(np.uint8)
