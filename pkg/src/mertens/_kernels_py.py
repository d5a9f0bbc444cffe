"""Pure-Python kernels: sieve segments, prefix accumulation, tuple sums.

This module mirrors the compiled extension ``mertens._kernels`` operation for
operation, in the same IEEE evaluation order, so both backends produce
bit-identical results on identical inputs.  It is selected at import time when
the extension is unavailable (or when MERTENS_PURE_PYTHON is set).
"""

import math

import numpy as np

BACKEND_NAME = "python"


class KernelView:
    """Per-table snapshot of the prime arrays as plain lists (fast to index)."""

    __slots__ = ("primes", "recip", "logp", "n")

    def __init__(self, primes, recip, logp):
        self.primes = primes.tolist()
        self.recip = recip.tolist()
        self.logp = logp.tolist()
        self.n = len(self.primes)


def make_view(primes, recip, logp):
    return KernelView(primes, recip, logp)


def sieve_segment(lo, hi, base_primes):
    """Odd primes in [lo, hi). lo must be odd and >= 3.

    base_primes: odd primes up to sqrt(hi - 1), as an int64 array.
    """
    n_odd = (hi - lo + 1) // 2
    mask = np.ones(n_odd, dtype=bool)
    for p in base_primes.tolist():
        start = ((lo + p - 1) // p) * p
        if start < p * p:
            start = p * p
        if start % 2 == 0:
            start += p
        if start >= hi:
            continue
        mask[(start - lo) // 2 :: p] = False
    return (lo + 2 * np.nonzero(mask)[0]).astype(np.int64)


def prefix_dd(terms):
    """Double-double running prefix sums of a float64 term array, in order."""
    n = len(terms)
    out_hi = np.empty(n, dtype=np.float64)
    out_lo = np.empty(n, dtype=np.float64)
    a_hi = 0.0
    a_lo = 0.0
    tl = terms.tolist()
    for i in range(n):
        w = tl[i]
        t = a_hi + w
        bb = t - a_hi
        e = (a_hi - (t - bb)) + (w - bb)
        lo2 = a_lo + e
        a_hi = t + lo2
        a_lo = lo2 - (a_hi - t)
        out_hi[i] = a_hi
        out_lo[i] = a_lo
    return out_hi, out_lo


def mertens_sum(recip):
    """Compensated sum of log1p(-1/p) + 1/p over the given reciprocals."""
    a_hi = 0.0
    a_lo = 0.0
    for r in recip.tolist():
        w = math.log1p(-r) + r
        t = a_hi + w
        bb = t - a_hi
        e = (a_hi - (t - bb)) + (w - bb)
        lo2 = a_lo + e
        a_hi = t + lo2
        a_lo = lo2 - (a_hi - t)
    return a_hi, a_lo


def _nested_div(n, x, d):
    q = n
    for _ in range(d):
        q //= x
        if q == 0:
            return 0
    return q


def _iroot(n, d):
    """floor(n ** (1/d)) exactly, for n >= 1, d >= 1."""
    if d == 1:
        return n
    x = int(n ** (1.0 / d))
    if x < 1:
        x = 1
    while x > 1 and _nested_div(n, x, d) == 0:
        x -= 1
    while _nested_div(n, x + 1, d) >= 1:
        x += 1
    return x


def enum_sum_range(view, X, k, s, i0, i1, budget):
    """Ordered k-tuple sum over the outermost prime index range [i0, i1).

    Accumulates 1/(p_1...p_k) (times ln^s of the product when s > 0) with
    an error-feedback accumulator; returns (hi, lo, count, overflow).
    """
    primes = view.primes
    recip = view.recip
    logp = view.logp
    n = view.n
    a_hi = 0.0
    a_lo = 0.0
    cnt = 0
    overflow = False

    def rec(bud, d, rp, ls):
        nonlocal a_hi, a_lo, cnt
        cap = bud >> (d - 1)
        if d == 1:
            for i in range(n):
                if primes[i] > cap:
                    break
                w = rp * recip[i]
                if s > 0:
                    L = ls + logp[i]
                    m = L
                    for _ in range(s - 1):
                        m = m * L
                    w = w * m
                t = a_hi + w
                bb = t - a_hi
                e = (a_hi - (t - bb)) + (w - bb)
                lo2 = a_lo + e
                a_hi = t + lo2
                a_lo = lo2 - (a_hi - t)
                cnt += 1
            return
        for i in range(n):
            p = primes[i]
            if p > cap:
                break
            rec(bud // p, d - 1, rp * recip[i], ls + logp[i])

    outer_cap = X >> (k - 1)
    for i in range(i0, i1):
        p = primes[i]
        if p > outer_cap:
            break
        if k == 1:
            w = recip[i]
            if s > 0:
                L = logp[i]
                m = L
                for _ in range(s - 1):
                    m = m * L
                w = w * m
            t = a_hi + w
            bb = t - a_hi
            e = (a_hi - (t - bb)) + (w - bb)
            lo2 = a_lo + e
            a_hi = t + lo2
            a_lo = lo2 - (a_hi - t)
            cnt += 1
        else:
            rec(X // p, k - 1, recip[i], logp[i])
        if cnt > budget:
            overflow = True
            break
    return a_hi, a_lo, cnt, overflow


def multiset_sum_range(view, X, k, s, i0, i1, budget):
    """Nondecreasing k-tuple sum weighted by the multinomial ordering count.

    Outermost index is the smallest prime of the tuple, restricted to
    [i0, i1); must agree with enum_sum_range exactly in exact arithmetic.
    """
    primes = view.primes
    recip = view.recip
    logp = view.logp
    n = view.n
    kfact = math.factorial(k)
    a_hi = 0.0
    a_lo = 0.0
    cnt = 0
    overflow = False

    def rec(i_min, last_i, run, bud, d, rp, ls, denom):
        nonlocal a_hi, a_lo, cnt
        cap = _iroot(bud, d)
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
                    for _ in range(s - 1):
                        m = m * L
                    w = w * m
                w = w * float(orderings)
                t = a_hi + w
                bb = t - a_hi
                e = (a_hi - (t - bb)) + (w - bb)
                lo2 = a_lo + e
                a_hi = t + lo2
                a_lo = lo2 - (a_hi - t)
                cnt += orderings
            else:
                rec(i, i, nrun, bud // primes[i], d - 1, rp * recip[i],
                    ls + logp[i], nden)

    outer_cap = _iroot(X, k)
    for i in range(i0, i1):
        p = primes[i]
        if p > outer_cap:
            break
        if k == 1:
            w = recip[i]
            if s > 0:
                L = logp[i]
                m = L
                for _ in range(s - 1):
                    m = m * L
                w = w * m
            w = w * 1.0
            t = a_hi + w
            bb = t - a_hi
            e = (a_hi - (t - bb)) + (w - bb)
            lo2 = a_lo + e
            a_hi = t + lo2
            a_lo = lo2 - (a_hi - t)
            cnt += 1
        else:
            rec(i, i, 1, X // p, k - 1, recip[i], logp[i], 1)
        if cnt > budget:
            overflow = True
            break
    return a_hi, a_lo, cnt, overflow
