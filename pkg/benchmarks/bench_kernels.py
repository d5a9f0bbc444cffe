#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--limit 1000000] [--repeat 3]

Each kernel runs on identical inputs; results are checked for bit-identity
before timings are reported.
"""

import argparse
import math
import time

import numpy as np

from mertens.backend import get_backend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--limit", type=int, default=10**6)
    parser.add_argument("--x", type=float, default=1e6)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    try:
        compiled = get_backend("compiled")
    except ImportError:
        raise SystemExit("compiled kernels not built; run pip install -e .")
    python = get_backend("python")

    from mertens.primes import _base_odd_primes, build_sieve

    base = _base_odd_primes(math.isqrt(args.limit))
    table = build_sieve(args.limit, kernels=compiled)
    primes = table.primes
    recip = table.recip
    logp = table.logp
    X = math.floor(args.x)
    views = {
        "compiled": compiled.make_view(primes, recip, logp),
        "python": python.make_view(primes, recip, logp),
    }

    cases = [
        (
            "sieve_segment(3..%d)" % min(args.limit, 3 + (1 << 24)),
            lambda k: k.sieve_segment(3, args.limit + 1, base),
        ),
        ("prefix_dd(1/p)", lambda k: k.prefix_dd(recip)),
        ("mertens_sum", lambda k: k.mertens_sum(recip)),
        (
            "enum k=2 s=0",
            lambda k, v=views: k.enum_sum_range(
                v[k.BACKEND_NAME], X, 2, 0, 0, len(primes), 10**10
            ),
        ),
        (
            "enum k=3 s=1",
            lambda k, v=views: k.enum_sum_range(
                v[k.BACKEND_NAME], X, 3, 1, 0, len(primes), 10**10
            ),
        ),
        (
            "multiset k=3 s=0",
            lambda k, v=views: k.multiset_sum_range(
                v[k.BACKEND_NAME], X, 3, 0, 0, len(primes), 10**10
            ),
        ),
    ]

    print(f"limit={args.limit:,}  x={args.x:g}  best of {args.repeat}")
    print(f"{'kernel':<28} {'compiled':>12} {'python':>12} {'speedup':>9}")
    for name, fn in cases:
        tc, rc = best_of(lambda: fn(compiled), args.repeat)
        tp, rp = best_of(lambda: fn(python), args.repeat)
        if isinstance(rc, np.ndarray):
            assert np.array_equal(rc, rp), f"{name}: backend mismatch"
        elif isinstance(rc, tuple) and isinstance(rc[0], np.ndarray):
            assert all(np.array_equal(a, b) for a, b in zip(rc, rp))
        else:
            assert rc == rp, f"{name}: backend mismatch {rc} vs {rp}"
        print(f"{name:<28} {tc * 1e3:>10.2f}ms {tp * 1e3:>10.2f}ms {tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
