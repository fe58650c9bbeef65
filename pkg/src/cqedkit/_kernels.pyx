# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled SplitMix64 kernels.  Must stay bit-identical to _kernels_py."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64_block(uint64_t seed, uint64_t start, Py_ssize_t n):
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef Py_ssize_t i
    cdef uint64_t state = seed + (start + 1) * GAMMA
    with nogil:
        for i in range(n):
            o[i] = _mix(state)
            state += GAMMA
    return out


def uniform_block(uint64_t seed, uint64_t start, Py_ssize_t n):
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef uint64_t state = seed + (start + 1) * GAMMA
    with nogil:
        for i in range(n):
            o[i] = <double>(_mix(state) >> 11) * TWO_M53
            state += GAMMA
    return out


def binomial_counts(uint64_t seed, uint64_t start, const double[::1] probs, int64_t n_shots):
    cdef Py_ssize_t n = probs.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i
    cdef int64_t k, count
    cdef double p
    cdef uint64_t state = seed + (start + 1) * GAMMA
    with nogil:
        for i in range(n):
            p = probs[i]
            count = 0
            for k in range(n_shots):
                if <double>(_mix(state) >> 11) * TWO_M53 < p:
                    count += 1
                state += GAMMA
            o[i] = count
    return out
