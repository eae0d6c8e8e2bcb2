# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Every function here has a drop-in twin in _fallback.py."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t, uint8_t


cdef extern from *:
    """
    static inline int olt_popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int olt_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int olt_popcount64(unsigned long long x) nogil
    int olt_ctz64(unsigned long long x) nogil


def fwht_int64(int64_t[::1] a):
    """In-place unnormalized Walsh-Hadamard butterfly on a length-2^n array."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef int64_t u, v
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    u = a[j]
                    v = a[j + h]
                    a[j] = u + v
                    a[j + h] = u - v
                i += 2 * h
            h *= 2


def mobius_u8(uint8_t[::1] a):
    """In-place binary Moebius transform (truth table <-> ANF coefficients)."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    a[j + h] ^= a[j]
                i += 2 * h
            h *= 2


def gray_min_distance(uint64_t[::1] target, uint64_t[:, ::1] gens):
    """Minimum popcount of target XOR c over the F2 span of the generator rows.

    Walks the span in Gray-code order so each step costs one row XOR.
    Returns (best distance, Gray index of a minimizer).
    """
    cdef Py_ssize_t g = gens.shape[0]
    cdef Py_ssize_t w = target.shape[0]
    cdef Py_ssize_t k
    cdef uint64_t j, total, best_j = 0
    cdef int row, dist, best
    cdef uint64_t[::1] cur = np.zeros(w, dtype=np.uint64)
    if g >= 63:
        raise ValueError("too many generators")
    total = (<uint64_t>1) << g
    with nogil:
        best = 0
        for k in range(w):
            best += olt_popcount64(target[k])
        for j in range(1, total):
            row = olt_ctz64(j)
            dist = 0
            for k in range(w):
                cur[k] ^= gens[row, k]
                dist += olt_popcount64(target[k] ^ cur[k])
            if dist < best:
                best = dist
                best_j = j
    return best, int(best_j)


def residual_update(uint64_t[:, ::1] R, uint64_t[::1] b, Py_ssize_t word, uint64_t bit):
    """XOR b into every row of R having the pivot bit set; return rows that became zero."""
    cdef Py_ssize_t rows = R.shape[0]
    cdef Py_ssize_t w = R.shape[1]
    cdef Py_ssize_t z, k
    cdef uint64_t acc
    out = []
    for z in range(rows):
        if R[z, word] & bit:
            acc = 0
            for k in range(w):
                R[z, k] ^= b[k]
                acc |= R[z, k]
            if acc == 0:
                out.append(z)
    return out


def lnds_length(double[::1] v):
    """Length of a longest non-decreasing subsequence, O(n log n)."""
    cdef Py_ssize_t n = v.shape[0]
    cdef double[::1] tails = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t size = 0, lo, hi, mid, i
    cdef double x
    with nogil:
        for i in range(n):
            x = v[i]
            lo = 0
            hi = size
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            tails[lo] = x
            if lo == size:
                size += 1
    return size


def lipschitz_keep(double[::1] v):
    """Largest set of positions keepable under |f(j) - f(i)| <= j - i between consecutive kept."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, j
    cdef long best_all = 0, cand
    cdef long[::1] best = np.zeros(n, dtype=np.int_)
    cdef double gap
    with nogil:
        for j in range(n):
            best[j] = 1
            for i in range(j):
                gap = v[j] - v[i]
                if gap < 0:
                    gap = -gap
                if gap <= j - i:
                    cand = best[i] + 1
                    if cand > best[j]:
                        best[j] = cand
            if best[j] > best_all:
                best_all = best[j]
    return best_all
