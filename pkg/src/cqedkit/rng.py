"""Portable, seeded random stream for synthetic data.

The generator is SplitMix64 (Steele, Lea & Flood 2014) used in counter mode:
draw ``i`` (0-based) of a stream with 64-bit seed ``s`` is

    mix(s + (i + 1) * 0x9E3779B97F4A7C15  mod 2**64)

with the standard SplitMix64 finalizer.  Uniforms take the top 53 bits,
``(x >> 11) * 2**-53``.  Binomial counts are exact: ``n`` Bernoulli trials,
each consuming one draw, success when the uniform is below ``p``.  Normals use
Box-Muller on two consecutive uniforms; exponentials use ``-log(1 - u)``.

The integer stream is identical on every platform.  The compiled kernel in
``_kernels`` is used when available; set ``CQEDKIT_PURE_PYTHON=1`` to force
the numpy fallback.  Both produce the same bits.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("CQEDKIT_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

_MASK64 = (1 << 64) - 1


def backends() -> dict:
    """Available kernel implementations keyed by name (for tests and benchmarks)."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found


class Stream:
    """Sequential view on a counter-based SplitMix64 stream."""

    def __init__(self, seed: int, start: int = 0, impl=None):
        seed = int(seed)
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.counter = int(start)
        self._impl = impl if impl is not None else _impl

    def _advance(self, n: int) -> int:
        start = self.counter
        self.counter += n
        return start

    def raw(self, n: int) -> np.ndarray:
        return self._impl.splitmix64_block(self.seed, self._advance(n), n)

    def uniform(self, n: int) -> np.ndarray:
        return self._impl.uniform_block(self.seed, self._advance(n), n)

    def binomial(self, n_shots: int, probs) -> np.ndarray:
        probs = np.ascontiguousarray(probs, dtype=np.float64)
        if np.any((probs < 0) | (probs > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        start = self._advance(int(n_shots) * probs.size)
        return self._impl.binomial_counts(self.seed, start, probs, int(n_shots))

    def normal(self, n: int) -> np.ndarray:
        u = self.uniform(2 * n).reshape(n, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        return radius * np.cos(2.0 * np.pi * u[:, 1])

    def exponential(self, n: int) -> np.ndarray:
        return -np.log1p(-self.uniform(n))
