# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled popcount kernels for exhaustive strategy and question sweeps."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline void _masks(int64_t s, int n, uint64_t* m0, uint64_t* m1) noexcept nogil:
    cdef int i
    cdef int64_t code
    m0[0] = 0
    m1[0] = 0
    for i in range(n):
        code = (s >> (2 * i)) & 3
        m0[0] |= <uint64_t>(code >> 1) << i
        m1[0] |= <uint64_t>(code & 1) << i


def strategy_win_counts(int n, const int64_t[::1] questions):
    cdef int64_t n_strat = 1 << (2 * n)
    cdef Py_ssize_t nq = questions.shape[0]
    out_arr = np.zeros(n_strat, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    targets_arr = np.empty(nq, dtype=np.int64)
    cdef int64_t[::1] targets = targets_arr
    cdef Py_ssize_t j
    cdef int64_t s, wins
    cdef uint64_t m0, m1, x, y
    for j in range(nq):
        targets[j] = (__builtin_popcountll(<uint64_t>questions[j]) >> 1) & 1
    with nogil:
        for s in range(n_strat):
            _masks(s, n, &m0, &m1)
            wins = 0
            for j in range(nq):
                x = <uint64_t>questions[j]
                y = (m0 & ~x) | (m1 & x)
                wins += (__builtin_popcountll(y) & 1) == targets[j]
            out[s] = wins
    return out_arr


def input_win_counts(int n, const int64_t[::1] questions, const int64_t[::1] strategies):
    cdef Py_ssize_t nq = questions.shape[0]
    cdef Py_ssize_t ns = strategies.shape[0]
    out_arr = np.zeros(nq, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    m0_arr = np.empty(ns, dtype=np.uint64)
    m1_arr = np.empty(ns, dtype=np.uint64)
    cdef uint64_t[::1] m0 = m0_arr
    cdef uint64_t[::1] m1 = m1_arr
    cdef Py_ssize_t j, t
    cdef int64_t wins, target
    cdef uint64_t x, y
    with nogil:
        for t in range(ns):
            _masks(strategies[t], n, &m0[t], &m1[t])
        for j in range(nq):
            x = <uint64_t>questions[j]
            target = (__builtin_popcountll(x) >> 1) & 1
            wins = 0
            for t in range(ns):
                y = (m0[t] & ~x) | (m1[t] & x)
                wins += (__builtin_popcountll(y) & 1) == target
            out[j] = wins
    return out_arr


def set_size_table(int n, const int64_t[::1] questions):
    cdef Py_ssize_t nq = questions.shape[0]
    out_arr = np.zeros((n + 1, 2, 2), dtype=np.int64)
    cdef int64_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t j
    cdef int k, a, b
    cdef uint64_t x
    with nogil:
        for j in range(nq):
            x = <uint64_t>questions[j]
            b = (__builtin_popcountll(x) >> 1) & 1
            for k in range(n + 1):
                a = __builtin_popcountll(x & ((<uint64_t>1 << k) - 1)) & 1
                out[k, a, b] += 1
    return out_arr
