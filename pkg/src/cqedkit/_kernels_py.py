"""Numpy fallback for the compiled SplitMix64 kernels.

Output must match ``_kernels.pyx`` bit for bit; uint64 array arithmetic
wraps modulo 2**64 exactly like the C code.
"""

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
TWO_M53 = 1.0 / 9007199254740992.0

# Bound on temporaries in binomial_counts (number of uint64 draws per chunk).
_CHUNK = 1 << 20


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def splitmix64_block(seed, start, n):
    counters = np.arange(1, n + 1, dtype=np.uint64) + np.uint64(start)
    return _mix(np.uint64(seed) + counters * GAMMA)


def uniform_block(seed, start, n):
    return (splitmix64_block(seed, start, n) >> np.uint64(11)).astype(np.float64) * TWO_M53


def binomial_counts(seed, start, probs, n_shots):
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    out = np.empty(probs.size, dtype=np.int64)
    if n_shots == 0:
        out[:] = 0
        return out
    rows = max(1, _CHUNK // n_shots)
    for lo in range(0, probs.size, rows):
        hi = min(lo + rows, probs.size)
        u = uniform_block(seed, start + lo * n_shots, (hi - lo) * n_shots).reshape(hi - lo, n_shots)
        out[lo:hi] = np.count_nonzero(u < probs[lo:hi, None], axis=1)
    return out
