"""Deterministic counter-based pseudo-random sign streams.

The generator is a keyed SplitMix64 stream: word ``k`` of the stream keyed
by ``seed`` is ``mix64(seed + (k+1)*GOLDEN)`` where ``mix64`` is the
SplitMix64 finalizer. Every output is a pure function of ``(seed, position)``,
so sampling is reproducible across platforms and independent of parallel
scheduling. Sign ``k`` of a stream is bit ``k % 64`` (least significant
first) of word ``k // 64``, mapped 0 -> -1 and 1 -> +1.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit integers."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def stream_word(seed: int, k: int) -> int:
    """Word ``k`` of the 64-bit stream keyed by ``seed``."""
    return mix64((seed + (k + 1) * GOLDEN) & MASK64)


def derive_seed(master: int, index: int) -> int:
    """Child seed ``index`` under ``master``.

    Injective in ``index`` for fixed ``master`` (the inner map is affine with
    an odd multiplier, the finalizer is a bijection). The extra ``mix64`` of
    the master keeps child streams disjoint from the master's own sign
    stream.
    """
    return mix64((mix64(master) + (index + 1) * GOLDEN) & MASK64)


def _mix64_u64(x: np.ndarray) -> np.ndarray:
    # vectorized mix64 on uint64 arrays; unsigned ops wrap mod 2**64
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def _words(seeds: np.ndarray, nwords: int) -> np.ndarray:
    ks = np.arange(1, nwords + 1, dtype=np.uint64)
    states = seeds[:, None] + ks[None, :] * np.uint64(GOLDEN)
    return _mix64_u64(states)


def sign_matrix(n: int, seeds) -> np.ndarray:
    """Sign streams for several seeds at once.

    Returns an int8 array of shape ``(len(seeds), n)`` with entries in
    {-1, +1}; row ``i`` equals ``sign_vector(n, seeds[i])``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(seeds, (int, np.integer)):
        seeds = [seeds]
    seeds = np.array([int(s) & MASK64 for s in seeds], dtype=np.uint64)
    nwords = -(-n // 64)
    words = _words(seeds, nwords)
    shifts = np.arange(64, dtype=np.uint64)
    bits = (words[:, :, None] >> shifts[None, None, :]) & np.uint64(1)
    signs = (2 * bits.astype(np.int8) - 1).reshape(seeds.size, 64 * nwords)
    return np.ascontiguousarray(signs[:, :n])


def sign_vector(n: int, seed: int) -> np.ndarray:
    """First ``n`` signs of the stream keyed by ``seed`` (int8, values +-1)."""
    return sign_matrix(n, [seed])[0]
