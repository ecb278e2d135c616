"""Seeded random sources.

Two generators share one small interface (``random``, ``randbelow``):

* ``default``: numpy's PCG64 bit generator.
* ``mitchell-moore``: additive lagged Fibonacci, ``X[n] = X[n-24] + X[n-55] mod 2**64``.

Per-trial streams come from :func:`derive_trial_rng`, which hashes the master
seed and trial index through :class:`numpy.random.SeedSequence`, so a trial's
stream does not depend on which worker runs it or in what order.
"""

from __future__ import annotations

import numpy as np

ALGORITHMS = ("default", "mitchell-moore")

_MASK64 = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)


class RandomSource:
    """Base class; subclasses supply 64-bit words via :meth:`next_u64`."""

    algorithm = "abstract"

    def next_u64(self) -> int:
        raise NotImplementedError

    def random(self) -> float:
        """Uniform float in ``[0, 1)`` with 53 random bits."""
        return (self.next_u64() >> 11) * _INV53

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection (unbiased)."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


class PCG64Source(RandomSource):
    algorithm = "default"

    def __init__(self, seed_seq: np.random.SeedSequence):
        self._gen = np.random.Generator(np.random.PCG64(seed_seq))
        self._buf: list[int] = []

    def next_u64(self) -> int:
        if not self._buf:
            # refill in blocks; the word stream itself is unchanged
            self._buf = self._gen.integers(0, 2**64, size=256, dtype=np.uint64, endpoint=False).tolist()
            self._buf.reverse()
        return self._buf.pop()


class MitchellMooreSource(RandomSource):
    """Additive lagged-Fibonacci generator with lags (24, 55)."""

    algorithm = "mitchell-moore"

    def __init__(self, seed_seq: np.random.SeedSequence):
        state = seed_seq.generate_state(55, dtype=np.uint64).tolist()
        if not any(x & 1 for x in state):
            # the low bit sequence must not be all zero or it stays so forever
            state[0] |= 1
        self._state = state
        self._i = 0  # position of X[n-55] in the circular buffer
        # warm-up discards the seeding transient
        for _ in range(10 * 55):
            self.next_u64()

    def next_u64(self) -> int:
        s = self._state
        i = self._i
        x = (s[i] + s[(i + 31) % 55]) & _MASK64  # X[n-55] + X[n-24]
        s[i] = x
        self._i = (i + 1) % 55
        return x


def _seed_sequence(master_seed: int, spawn_key: tuple[int, ...] = ()) -> np.random.SeedSequence:
    if master_seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=spawn_key)


def make_rng(seed: int, algorithm: str = "default") -> RandomSource:
    return _build(_seed_sequence(seed), algorithm)


def derive_trial_rng(master_seed: int, trial_index: int, algorithm: str = "default") -> RandomSource:
    """Independent stream for trial ``trial_index`` of a run seeded by ``master_seed``."""
    if trial_index < 0:
        raise ValueError("trial index must be non-negative")
    return _build(_seed_sequence(master_seed, (int(trial_index),)), algorithm)


def _build(seq: np.random.SeedSequence, algorithm: str) -> RandomSource:
    if algorithm == "default":
        return PCG64Source(seq)
    if algorithm == "mitchell-moore":
        return MitchellMooreSource(seq)
    raise ValueError(f"unknown RNG algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
