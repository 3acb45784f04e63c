"""Deterministic, platform-independent pseudo-random primitives.

Everything that needs randomness (grid initialization, per-iteration draw
order) goes through a counter-based SplitMix64 stream so that results are
reproducible from a single 64-bit seed, independent of library RNG versions.
"""

from __future__ import annotations

import numpy as np

_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

# Stream tags keep independent consumers of one seed from overlapping.
STREAM_INIT = 0x1
STREAM_ORDER = 0x2
STREAM_WARM = 0x3


def mix64(x: int) -> int:
    """SplitMix64 finalizer (scalar)."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(seed: int, tag: int) -> int:
    """Independent sub-seed for a named stream."""
    return mix64((seed ^ mix64(tag * _GAMMA)) & _MASK)


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x ^= x >> np.uint64(30)
        x *= np.uint64(0xBF58476D1CE4E5B9)
        x ^= x >> np.uint64(27)
        x *= np.uint64(0x94D049BB133111EB)
        x ^= x >> np.uint64(31)
    return x


def u64_stream(seed: int, count: int) -> np.ndarray:
    """`count` SplitMix64 outputs for counters 1..count (uint64 array)."""
    with np.errstate(over="ignore"):
        counters = (np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GAMMA)
                    + np.uint64(seed & _MASK))
    return _mix64_array(counters)


def u01_stream(seed: int, count: int) -> np.ndarray:
    """Uniform floats in [0,1) with 53-bit resolution."""
    return (u64_stream(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def bounded_int(u: int, n: int) -> int:
    """Map one uint64 to [0, n) using its top 32 bits (n must be < 2**32)."""
    return (((u >> 32) & 0xFFFFFFFF) * n) >> 32


def iteration_order(seed: int, iteration: int, count: int) -> list[int]:
    """Fisher-Yates permutation of range(count) for one training iteration.

    Reshuffled per iteration: the sub-seed mixes the iteration index into the
    base seed, so the order is a pure function of (seed, iteration).
    """
    sub = derive_seed(derive_seed(seed, STREAM_ORDER), iteration)
    perm = list(range(count))
    if count <= 1:
        return perm
    draws = u64_stream(sub, count - 1)
    for k, j in enumerate(range(count - 1, 0, -1)):
        i = bounded_int(int(draws[k]), j + 1)
        perm[j], perm[i] = perm[i], perm[j]
    return perm


def iteration_order_batch(seed: int, first_iteration: int, n_iterations: int,
                          count: int) -> np.ndarray:
    """Stack of `iteration_order` results, shape (n_iterations, count), int32.

    Vectorized across iterations; must stay bit-equal to the scalar version
    (covered by tests).
    """
    out = np.tile(np.arange(count, dtype=np.int32), (n_iterations, 1))
    if count <= 1 or n_iterations == 0:
        return out
    base = derive_seed(seed, STREAM_ORDER)
    subs = np.array([derive_seed(base, first_iteration + i)
                     for i in range(n_iterations)], dtype=np.uint64)
    rows = np.arange(n_iterations)
    with np.errstate(over="ignore"):
        for k, j in enumerate(range(count - 1, 0, -1)):
            draws = _mix64_array(subs + np.uint64((k + 1) * _GAMMA & _MASK))
            idx = ((draws >> np.uint64(32)) * np.uint64(j + 1)) >> np.uint64(32)
            idx = idx.astype(np.int64)
            tmp = out[rows, j].copy()
            out[rows, j] = out[rows, idx]
            out[rows, idx] = tmp
    return out
