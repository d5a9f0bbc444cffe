"""Prime sieve, ordered prime table, and single-prime sum primitives.

The PrimeTable holds every prime up to a limit together with double-double
prefix sums of 1/p and ln(p)/p, so prefix differences reproduce individual
terms at extended precision.  A binary cache format allows reuse across runs.
"""

import math
import struct
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import backend as _backend_mod
from .errors import (
    CacheCorruptionError,
    CacheFormatError,
    DomainError,
    OutOfRangeError,
    ResourceLimitError,
)
from .xfloat import XFloat

# One segment spans 2^24 integers = 2^23 odd values = a 2^20-byte bitset in
# the compiled kernel.
SEGMENT_SPAN = 1 << 24

DEFAULT_MAX_LIMIT = 1 << 34

CACHE_MAGIC = b"MERTPRIM"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sIQQ")


def _base_odd_primes(limit):
    """Odd primes up to `limit` by a plain byte sieve (limit is small)."""
    if limit < 3:
        return np.empty(0, dtype=np.int64)
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * ((limit - p * p) // p + 1)
    return np.array([i for i in range(3, limit + 1) if sieve[i]], dtype=np.int64)


class PrimeTable:
    """Immutable table of all primes <= limit with extended-precision prefixes.

    prefix_recip(i) and prefix_logp_over_p(i) return the double-double running
    sums over primes[0..i]; both are nondecreasing and the same length as
    primes.
    """

    __slots__ = (
        "limit",
        "primes",
        "recip",
        "logp",
        "prefix_recip_hi",
        "prefix_recip_lo",
        "prefix_logp_hi",
        "prefix_logp_lo",
        "backend",
        "view",
        "_powlog_prefix_cache",
    )

    def __init__(self, limit, primes, kernels):
        self.limit = int(limit)
        self.primes = primes
        primes_f = primes.astype(np.float64)
        self.recip = 1.0 / primes_f
        self.logp = np.log(primes_f)
        self.prefix_recip_hi, self.prefix_recip_lo = kernels.prefix_dd(self.recip)
        self.prefix_logp_hi, self.prefix_logp_lo = kernels.prefix_dd(
            self.logp * self.recip
        )
        for arr in (
            self.primes,
            self.recip,
            self.logp,
            self.prefix_recip_hi,
            self.prefix_recip_lo,
            self.prefix_logp_hi,
            self.prefix_logp_lo,
        ):
            arr.flags.writeable = False
        self.backend = kernels
        self.view = kernels.make_view(self.primes, self.recip, self.logp)
        self._powlog_prefix_cache = {}

    def __len__(self):
        return len(self.primes)

    def __eq__(self, other):
        if not isinstance(other, PrimeTable):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self.primes, other.primes)

    def count_leq(self, x):
        """Number of table primes <= x (x real; the comparison is exact)."""
        return int(np.searchsorted(self.primes, float(x), side="right"))

    def prefix_recip(self, i):
        return XFloat(self.prefix_recip_hi[i], self.prefix_recip_lo[i])

    def prefix_logp_over_p(self, i):
        return XFloat(self.prefix_logp_hi[i], self.prefix_logp_lo[i])

    def powlog_prefix(self, t):
        """Prefix sums of ln(p)^t / p as (hi, lo) arrays; t=0,1 are the
        stored aggregates, higher t built lazily (weighted hyperbola sums)."""
        if t == 0:
            return self.prefix_recip_hi, self.prefix_recip_lo
        if t == 1:
            return self.prefix_logp_hi, self.prefix_logp_lo
        cached = self._powlog_prefix_cache.get(t)
        if cached is None:
            terms = self.logp.copy()
            for _ in range(t - 1):
                terms = terms * self.logp
            terms = terms * self.recip
            cached = self.backend.prefix_dd(terms)
            self._powlog_prefix_cache[t] = cached
        return cached


def build_sieve(limit, threads=1, max_limit=DEFAULT_MAX_LIMIT, kernels=None):
    """Sieve all primes <= limit into a PrimeTable.

    Segmented and odd-only; segments are independent, so they may be sieved
    in parallel, and are always merged in index order (deterministic output).
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > max_limit:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds configured maximum {max_limit}"
        )
    if kernels is None:
        kernels = _backend_mod.kernels
    base = _base_odd_primes(math.isqrt(limit))
    segments = []
    lo = 3
    while lo <= limit:
        hi = min(lo + SEGMENT_SPAN, limit + 1)
        segments.append((lo, hi))
        lo = lo + SEGMENT_SPAN

    def run(seg):
        return kernels.sieve_segment(seg[0], seg[1], base)

    if threads > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, segments))
    else:
        parts = [run(seg) for seg in segments]
    primes = np.concatenate([np.array([2], dtype=np.int64)] + parts)
    return PrimeTable(limit, primes, kernels)


def _prefix_lookup(table, x, hi_arr, lo_arr):
    x = float(x)
    if x <= 0:
        raise DomainError(f"sum bound must be positive, got {x}")
    if x > table.limit:
        raise OutOfRangeError(
            f"bound {x} exceeds table limit {table.limit}; rebuild the sieve"
        )
    i = table.count_leq(x)
    if i == 0:
        return XFloat(0.0)
    return XFloat(hi_arr[i - 1], lo_arr[i - 1])


def reciprocal_sum(table, x):
    """Sum of 1/p over primes p <= x, from the prefix aggregates."""
    return _prefix_lookup(table, x, table.prefix_recip_hi, table.prefix_recip_lo)


def logp_over_p_sum(table, x):
    """Sum of ln(p)/p over primes p <= x, from the prefix aggregates."""
    return _prefix_lookup(table, x, table.prefix_logp_hi, table.prefix_logp_lo)


def sqrt_threshold(x):
    """Largest integer m with m*m <= x, for real x >= 0 (exact comparison)."""
    return math.isqrt(math.floor(x))


def power_log_sum(table, x, k):
    """Sum of (1/p) * (ln p / ln x)^k over primes p <= sqrt(x).

    Converges to 1/(k 2^k) as x grows; used to validate that limit.
    """
    x = float(x)
    if k < 1:
        raise DomainError(f"power k must be >= 1, got {k}")
    if x < 4:
        raise DomainError(f"x must be >= 4 so sqrt(x) >= 2, got {x}")
    m = sqrt_threshold(x)
    if m > table.limit:
        raise OutOfRangeError(f"sqrt({x}) exceeds table limit {table.limit}")
    n = table.count_leq(m)
    lnx = math.log(x)
    a_hi = 0.0
    a_lo = 0.0
    recip = table.recip
    logp = table.logp
    for i in range(n):
        ratio = logp[i] / lnx
        w = ratio
        for _ in range(k - 1):
            w = w * ratio
        w = w * recip[i]
        t = a_hi + w
        bb = t - a_hi
        e = (a_hi - (t - bb)) + (w - bb)
        lo2 = a_lo + e
        a_hi = t + lo2
        a_lo = lo2 - (a_hi - t)
    return XFloat(a_hi, a_lo)


def save_cache(table, path):
    """Write the prime table to `path` (header + little-endian u64 primes)."""
    with open(path, "wb") as fh:
        fh.write(
            _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit, len(table.primes))
        )
        fh.write(table.primes.astype("<u8").tobytes())


def load_cache(path, kernels=None):
    """Read a prime table; prefix aggregates are recomputed, not stored."""
    if kernels is None:
        kernels = _backend_mod.kernels
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CacheCorruptionError(f"cache file {path} shorter than its header")
    magic, version, limit, count = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"bad cache magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"unsupported cache version {version}")
    body = raw[_HEADER.size :]
    if len(body) != 8 * count:
        raise CacheCorruptionError(
            f"cache body holds {len(body)} bytes, header claims {count} primes"
        )
    primes = np.frombuffer(body, dtype="<u8").astype(np.int64)
    if count:
        diffs_ok = bool(np.all(np.diff(primes) > 0))
        if primes[0] != 2 or not diffs_ok or primes[-1] > limit:
            raise CacheCorruptionError(f"cache file {path} fails prime invariants")
    return PrimeTable(limit, primes, kernels)
