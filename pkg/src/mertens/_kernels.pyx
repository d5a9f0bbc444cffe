# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: sieve segments, prefix accumulation, tuple sums.

Mirrors mertens._kernels_py operation for operation in the same IEEE
evaluation order, so both backends produce bit-identical results on identical
inputs.  The heavy loops release the GIL so chunked callers can thread.
"""

from libc.math cimport log1p, pow
from libc.stdlib cimport calloc, free

import math

import numpy as np

BACKEND_NAME = "compiled"


cdef class KernelView:
    """Per-table snapshot of the prime arrays as typed memoryviews."""

    cdef const long long[::1] primes
    cdef const double[::1] recip
    cdef const double[::1] logp
    cdef Py_ssize_t n

    def __init__(self, primes, recip, logp):
        self.primes = primes
        self.recip = recip
        self.logp = logp
        self.n = primes.shape[0]


def make_view(primes, recip, logp):
    return KernelView(primes, recip, logp)


def sieve_segment(long long lo, long long hi, const long long[::1] base_primes):
    """Odd primes in [lo, hi). lo must be odd and >= 3.

    Uses a byte-backed bitset over the odd numbers of the segment (1 bit per
    odd value, so a full 2^24-wide segment needs 2^20 bytes).
    """
    cdef Py_ssize_t n_odd = <Py_ssize_t>((hi - lo + 1) // 2)
    cdef Py_ssize_t n_bytes = (n_odd + 7) >> 3
    cdef unsigned char* bits = <unsigned char*>calloc(n_bytes, 1)
    if bits == NULL:
        raise MemoryError("sieve segment bitset")
    cdef Py_ssize_t nb = base_primes.shape[0]
    cdef Py_ssize_t bi, idx, count, j
    cdef long long p, start, v
    try:
        with nogil:
            for bi in range(nb):
                p = base_primes[bi]
                start = ((lo + p - 1) // p) * p
                if start < p * p:
                    start = p * p
                if start % 2 == 0:
                    start += p
                if start >= hi:
                    continue
                v = start
                while v < hi:
                    idx = <Py_ssize_t>((v - lo) >> 1)
                    bits[idx >> 3] |= <unsigned char>(1 << (idx & 7))
                    v += 2 * p
            count = 0
            for idx in range(n_odd):
                if not (bits[idx >> 3] >> (idx & 7)) & 1:
                    count += 1
        out = np.empty(count, dtype=np.int64)
        _collect_unmarked(bits, n_odd, lo, out)
        return out
    finally:
        free(bits)


cdef void _collect_unmarked(unsigned char* bits, Py_ssize_t n_odd,
                            long long lo, long long[::1] out) noexcept:
    cdef Py_ssize_t idx, j = 0
    with nogil:
        for idx in range(n_odd):
            if not (bits[idx >> 3] >> (idx & 7)) & 1:
                out[j] = lo + 2 * idx
                j += 1


def prefix_dd(const double[::1] terms):
    """Double-double running prefix sums of a float64 term array, in order."""
    cdef Py_ssize_t n = terms.shape[0]
    out_hi_arr = np.empty(n, dtype=np.float64)
    out_lo_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out_hi = out_hi_arr
    cdef double[::1] out_lo = out_lo_arr
    cdef double a_hi = 0.0, a_lo = 0.0, w, t, bb, e, lo2
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            w = terms[i]
            t = a_hi + w
            bb = t - a_hi
            e = (a_hi - (t - bb)) + (w - bb)
            lo2 = a_lo + e
            a_hi = t + lo2
            a_lo = lo2 - (a_hi - t)
            out_hi[i] = a_hi
            out_lo[i] = a_lo
    return out_hi_arr, out_lo_arr


def mertens_sum(const double[::1] recip):
    """Compensated sum of log1p(-1/p) + 1/p over the given reciprocals."""
    cdef double a_hi = 0.0, a_lo = 0.0, r, w, t, bb, e, lo2
    cdef Py_ssize_t i, n = recip.shape[0]
    with nogil:
        for i in range(n):
            r = recip[i]
            w = log1p(-r) + r
            t = a_hi + w
            bb = t - a_hi
            e = (a_hi - (t - bb)) + (w - bb)
            lo2 = a_lo + e
            a_hi = t + lo2
            a_lo = lo2 - (a_hi - t)
    return a_hi, a_lo


cdef struct Acc:
    double hi
    double lo
    long long count


cdef inline void acc_add(Acc* a, double w) noexcept nogil:
    cdef double t = a.hi + w
    cdef double bb = t - a.hi
    cdef double e = (a.hi - (t - bb)) + (w - bb)
    cdef double lo2 = a.lo + e
    a.hi = t + lo2
    a.lo = lo2 - (a.hi - t)


cdef inline long long _nested_div(long long n, long long x, int d) noexcept nogil:
    cdef long long q = n
    cdef int j
    for j in range(d):
        q //= x
        if q == 0:
            return 0
    return q


cdef inline long long _iroot(long long n, int d) noexcept nogil:
    if d == 1:
        return n
    cdef long long x = <long long>pow(<double>n, 1.0 / <double>d)
    if x < 1:
        x = 1
    while x > 1 and _nested_div(n, x, d) == 0:
        x -= 1
    while _nested_div(n, x + 1, d) >= 1:
        x += 1
    return x


cdef void _enum_rec(const long long* primes, const double* recip,
                    const double* logp, Py_ssize_t n, long long bud, int d,
                    double rp, double ls, int s, Acc* acc) noexcept nogil:
    cdef long long cap = bud >> (d - 1)
    cdef Py_ssize_t i
    cdef int j
    cdef double w, L, m
    if d == 1:
        for i in range(n):
            if primes[i] > cap:
                break
            w = rp * recip[i]
            if s > 0:
                L = ls + logp[i]
                m = L
                for j in range(s - 1):
                    m = m * L
                w = w * m
            acc_add(acc, w)
            acc.count += 1
        return
    for i in range(n):
        if primes[i] > cap:
            break
        _enum_rec(primes, recip, logp, n, bud // primes[i], d - 1,
                  rp * recip[i], ls + logp[i], s, acc)


def enum_sum_range(KernelView view, long long X, int k, int s,
                   Py_ssize_t i0, Py_ssize_t i1, long long budget):
    """Ordered k-tuple sum over the outermost prime index range [i0, i1)."""
    cdef const long long* primes = &view.primes[0] if view.n else NULL
    cdef const double* recip = &view.recip[0] if view.n else NULL
    cdef const double* logp = &view.logp[0] if view.n else NULL
    cdef Py_ssize_t n = view.n
    cdef Acc acc
    acc.hi = 0.0
    acc.lo = 0.0
    acc.count = 0
    cdef bint overflow = False
    cdef long long outer_cap = X >> (k - 1)
    cdef Py_ssize_t i
    cdef int j
    cdef double w, L, m
    if i1 > n:
        i1 = n
    with nogil:
        for i in range(i0, i1):
            if primes[i] > outer_cap:
                break
            if k == 1:
                w = recip[i]
                if s > 0:
                    L = logp[i]
                    m = L
                    for j in range(s - 1):
                        m = m * L
                    w = w * m
                acc_add(&acc, w)
                acc.count += 1
            else:
                _enum_rec(primes, recip, logp, n, X // primes[i], k - 1,
                          recip[i], logp[i], s, &acc)
            if acc.count > budget:
                overflow = True
                break
    return acc.hi, acc.lo, acc.count, overflow


cdef void _multi_rec(const long long* primes, const double* recip,
                     const double* logp, Py_ssize_t n, Py_ssize_t i_min,
                     Py_ssize_t last_i, int run, long long bud, int d,
                     double rp, double ls, long long denom, long long kfact,
                     int s, Acc* acc) noexcept nogil:
    cdef long long cap = _iroot(bud, d)
    cdef Py_ssize_t i
    cdef int j, nrun
    cdef long long nden, orderings
    cdef double w, L, m
    for i in range(i_min, n):
        if primes[i] > cap:
            break
        nrun = run + 1 if i == last_i else 1
        nden = denom * nrun
        if d == 1:
            orderings = kfact // nden
            w = rp * recip[i]
            if s > 0:
                L = ls + logp[i]
                m = L
                for j in range(s - 1):
                    m = m * L
                w = w * m
            w = w * <double>orderings
            acc_add(acc, w)
            acc.count += orderings
        else:
            _multi_rec(primes, recip, logp, n, i, i, nrun, bud // primes[i],
                       d - 1, rp * recip[i], ls + logp[i], nden, kfact, s, acc)


def multiset_sum_range(KernelView view, long long X, int k, int s,
                       Py_ssize_t i0, Py_ssize_t i1, long long budget):
    """Nondecreasing k-tuple sum weighted by the multinomial ordering count."""
    cdef const long long* primes = &view.primes[0] if view.n else NULL
    cdef const double* recip = &view.recip[0] if view.n else NULL
    cdef const double* logp = &view.logp[0] if view.n else NULL
    cdef Py_ssize_t n = view.n
    cdef long long kfact = math.factorial(k)
    cdef Acc acc
    acc.hi = 0.0
    acc.lo = 0.0
    acc.count = 0
    cdef bint overflow = False
    cdef long long outer_cap = _iroot(X, k)
    cdef Py_ssize_t i
    cdef int j
    cdef double w, L, m
    if i1 > n:
        i1 = n
    with nogil:
        for i in range(i0, i1):
            if primes[i] > outer_cap:
                break
            if k == 1:
                w = recip[i]
                if s > 0:
                    L = logp[i]
                    m = L
                    for j in range(s - 1):
                        m = m * L
                    w = w * m
                w = w * 1.0
                acc_add(&acc, w)
                acc.count += 1
            else:
                _multi_rec(primes, recip, logp, n, i, i, 1, X // primes[i],
                           k - 1, recip[i], logp[i], 1, kfact, s, &acc)
            if acc.count > budget:
                overflow = True
                break
    return acc.hi, acc.lo, acc.count, overflow
