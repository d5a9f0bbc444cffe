"""Exact multiple prime-reciprocal sums and their asymptotic predictions.

S_k(x) sums 1/(p_1...p_k) over ordered k-tuples of primes with product <= x;
the weighted variant carries ln^s(p_1...p_k).  Three routes are provided:

* enumerate -- ordered-tuple recursion, the ground truth;
* multiset  -- nondecreasing tuples weighted by their ordering count, an
  independent oracle that must agree exactly in exact arithmetic;
* hyperbola -- the split-point identity: sum over the last index below y,
  plus short-prefix tuples paired with single-prime prefix sums, minus the
  overlap product.  An identity, so it must agree with enumeration too.

All product/bound comparisons are exact: tuple budgets use integer floor
division and the split threshold uses exact rational arithmetic on the float
inputs, so sharp inequalities never wobble.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, OutOfRangeError, ResourceLimitError
from .polynomials import coeff_seq, eval_poly, prediction_poly
from .specfun import log_power_integral_closed
from .xfloat import XFloat, ZERO, ln as xln, powi

CHUNK = 1024  # outermost prime range is reduced in fixed chunks, in order
TUPLE_BUDGET = 10**10
MAX_K = 6
MAX_S = 4


class Method(Enum):
    ENUMERATE = "enumerate"
    MULTISET = "multiset"
    HYPERBOLA = "hyperbola"


@dataclass(frozen=True)
class SumSpec:
    k: int
    s: int = 0
    x: float = 2.0
    method: Method = Method.ENUMERATE
    split_y: float = None

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise DomainError(f"k must be in [1, {MAX_K}], got {self.k}")
        if not 0 <= self.s <= MAX_S:
            raise DomainError(f"s must be in [0, {MAX_S}], got {self.s}")
        if not self.x >= 2:
            raise DomainError(f"x must be >= 2, got {self.x}")
        if self.split_y is not None and not 1.0 < self.split_y < self.x:
            raise DomainError(
                f"split point {self.split_y} outside (1, {self.x})"
            )


@dataclass(frozen=True)
class SumValue:
    value: XFloat
    term_count: int
    method: Method
    spec: SumSpec


def _require_primes(table, bound):
    if bound > table.limit:
        raise OutOfRangeError(
            f"sum needs primes up to {bound}, table stops at {table.limit}"
        )


def _run_chunked(runner, n_outer, threads, budget):
    """Reduce kernel partial sums over fixed outer chunks, in chunk order."""
    chunks = [(i, min(i + CHUNK, n_outer)) for i in range(0, n_outer, CHUNK)]
    if not chunks:
        return ZERO, 0
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: runner(c[0], c[1]), chunks))
    else:
        parts = [runner(i0, i1) for (i0, i1) in chunks]
    total = ZERO
    count = 0
    for hi, lo, cnt, overflow in parts:
        if overflow:
            raise ResourceLimitError(
                f"tuple enumeration exceeded the budget of {budget}"
            )
        total = total + XFloat(hi, lo)
        count += cnt
    if count > budget:
        raise ResourceLimitError(
            f"tuple enumeration exceeded the budget of {budget}"
        )
    return total, count


def _kernel_sum(table, kernel_fn, X, k, s, threads, budget):
    cap = X >> (k - 1)
    _require_primes(table, cap)
    n_outer = table.count_leq(cap)

    def runner(i0, i1):
        return kernel_fn(table.view, X, k, s, i0, i1, budget)

    return _run_chunked(runner, n_outer, threads, budget)


def sum_enumerate(table, spec, threads=1, budget=TUPLE_BUDGET):
    """Ordered-tuple recursion; the reference semantics for every sum."""
    if spec.method is not Method.ENUMERATE:
        raise DomainError(f"spec.method is {spec.method}, expected ENUMERATE")
    X = math.floor(spec.x)
    value, count = _kernel_sum(
        table, table.backend.enum_sum_range, X, spec.k, spec.s, threads, budget
    )
    return SumValue(value=value, term_count=count, method=spec.method, spec=spec)


def sum_multiset(table, spec, threads=1, budget=TUPLE_BUDGET):
    """Nondecreasing tuples weighted by multinomial ordering counts."""
    if spec.method is not Method.MULTISET:
        raise DomainError(f"spec.method is {spec.method}, expected MULTISET")
    X = math.floor(spec.x)
    value, count = _kernel_sum(
        table, table.backend.multiset_sum_range, X, spec.k, spec.s, threads, budget
    )
    return SumValue(value=value, term_count=count, method=spec.method, spec=spec)


class _InnerSums:
    """Memoized weighted sums L_{k,s}(n) over integer budgets.

    L_{k,s} is a step function of its real argument, so the integer floor of
    the budget is a complete cache key.
    """

    def __init__(self, table, threads, budget):
        self.table = table
        self.threads = threads
        self.budget = budget
        self.memo = {}

    def weighted_prefix(self, t, n):
        """W_t(n) = sum of ln^t(p)/p over p <= n, plus the prime count."""
        hi, lo = self.table.powlog_prefix(t)
        i = self.table.count_leq(n)
        if i == 0:
            return ZERO, 0
        return XFloat(hi[i - 1], lo[i - 1]), i

    def value(self, k, s, n):
        """(L_{k,s}(n), ordered tuple count)."""
        if n < (1 << k):
            return ZERO, 0
        if k == 1:
            return self.weighted_prefix(s, n)
        key = (k, s, n)
        hit = self.memo.get(key)
        if hit is None:
            hit = _kernel_sum(
                self.table,
                self.table.backend.enum_sum_range,
                n,
                k,
                s,
                self.threads,
                self.budget,
            )
            self.memo[key] = hit
        return hit


def sum_hyperbola(table, spec, threads=1, budget=TUPLE_BUDGET):
    """Split-point identity evaluation with split y (default sqrt(x)).

    value = sum_{p<=y} sum_t C(s,t) (ln^t p / p) L_{k-1,s-t}(x/p)
          + sum_{tuples q<=x/y} (1/q) sum_t C(s,t) ln^(s-t)(q) W_t(x/q)
          - sum_t C(s,t) W_t(y) L_{k-1,s-t}(x/y).
    """
    if spec.method is not Method.HYPERBOLA:
        raise DomainError(f"spec.method is {spec.method}, expected HYPERBOLA")
    k, s, x = spec.k, spec.s, spec.x
    if k < 2:
        raise DomainError("the split identity needs k >= 2")
    y = spec.split_y if spec.split_y is not None else math.sqrt(x)
    if not 1.0 < y < x:
        raise DomainError(f"split point {y} outside (1, {x})")
    X = math.floor(x)
    cap = X >> (k - 1)
    _require_primes(table, cap)
    # exact rational threshold: tuples q with q <= x/y
    T = int(Fraction(x) / Fraction(y))
    inner = _InnerSums(table, threads, budget)
    binom = [math.comb(s, t) for t in range(s + 1)]
    primes = table.primes
    recip = table.recip
    logp = table.logp

    # last index below the split: p <= y (and p <= cap, beyond which L = 0)
    n1 = min(table.count_leq(y), table.count_leq(cap))
    total = ZERO
    count1 = 0
    for i in range(n1):
        bud = X // int(primes[i])
        fac = recip[i]
        for t in range(s + 1):
            lval, lcnt = inner.value(k - 1, s - t, bud)
            if t == 0:
                count1 += lcnt
            total = total + XFloat(binom[t] * fac) * lval
            fac = fac * logp[i]

    # short-prefix tuples q <= T paired with single-prime prefix sums
    count2 = 0
    if T >= (1 << (k - 1)):
        n = len(primes)
        adds = []
        counts = [0]

        def walk(bud, d, q, rp, ls):
            cap_d = bud >> (d - 1)
            for i in range(n):
                p = int(primes[i])
                if p > cap_d:
                    break
                if d == 1:
                    z = X // (q * p)
                    rpp = rp * recip[i]
                    lss = ls + logp[i]
                    for t in range(s + 1):
                        wv, wc = inner.weighted_prefix(t, z)
                        weight = binom[t] * rpp
                        for _ in range(s - t):
                            weight = weight * lss
                        adds.append(XFloat(weight) * wv)
                        if t == 0:
                            counts[0] += wc
                else:
                    walk(bud // p, d - 1, q * p, rp * recip[i], ls + logp[i])

        walk(T, k - 1, 1, 1.0, 0.0)
        for v in adds:
            total = total + v
        count2 = counts[0]

        # overlap: W_t(y) times the short-prefix tuple sums
        pi_y = table.count_leq(y)
        cnt_T = 0
        for t in range(s + 1):
            wy, _ = inner.weighted_prefix(t, math.floor(y))
            lval, lcnt = inner.value(k - 1, s - t, T)
            if t == 0:
                cnt_T = lcnt
            total = total - XFloat(binom[t]) * wy * lval
        count2 -= pi_y * cnt_T

    count = count1 + count2
    if count > budget:
        raise ResourceLimitError(f"tuple enumeration exceeded the budget of {budget}")
    return SumValue(value=total, term_count=count, method=spec.method, spec=spec)


def compute_sum(table, spec, threads=1, budget=TUPLE_BUDGET):
    """Dispatch on spec.method."""
    if spec.method is Method.ENUMERATE:
        return sum_enumerate(table, spec, threads, budget)
    if spec.method is Method.MULTISET:
        return sum_multiset(table, spec, threads, budget)
    return sum_hyperbola(table, spec, threads, budget)


# ---------------------------------------------------------------------------
# Asymptotic predictions
# ---------------------------------------------------------------------------

_E = math.e


def loglog(x):
    """ln(ln x) as an XFloat; requires x > 1."""
    return xln(xln(XFloat(float(x))))


class Predictor:
    """Caches the coefficient sequence and polynomials for main-term
    evaluation; bound to a Constants bundle (B enters as the shift)."""

    def __init__(self, constants, kmax=12):
        self.constants = constants
        self.kmax = kmax
        self.seq = coeff_seq(max(kmax, 2))
        self._polys = {}

    def poly(self, k):
        got = self._polys.get(k)
        if got is None:
            got = prediction_poly(k, self.seq)
            self._polys[k] = got
        return got

    def _check_x(self, x):
        if not x > _E:
            raise DomainError(f"prediction needs x > e, got {x}")

    def main_term(self, k, x):
        """Main term of the unweighted sum: the degree-k polynomial at
        loglog x (k = 0 gives 1, the empty product)."""
        if k < 0:
            raise DomainError(f"k must be >= 0, got {k}")
        self._check_x(x)
        if k == 0:
            return XFloat(1.0)
        return eval_poly(self.poly(k), loglog(x), self.constants.B)

    def _alternating_main(self, k, s, ll):
        """sum_l (-1)^l A_k^(l+1)/s^(l+1) P_(k-1-l)(ll), A_k^l = k!/(k-l)!."""
        total = ZERO
        B = self.constants.B
        for l in range(k):
            arrangements = math.factorial(k) // math.factorial(k - l - 1)
            if l % 2:
                arrangements = -arrangements
            coeff = XFloat.from_int(arrangements) / XFloat.from_int(s ** (l + 1))
            total = total + coeff * eval_poly(self.poly(k - 1 - l), ll, B)
        return total

    def boundary_constant(self, k):
        """f(2) = sum_l (-1)^l A_k^(l+1) P_(k-1-l)(loglog 2) * ln 2."""
        a = self.constants.a
        ll2 = xln(a)  # loglog 2 = ln(ln 2) < 0, a legitimate polynomial input
        total = ZERO
        for l in range(k):
            arrangements = math.factorial(k) // math.factorial(k - l - 1)
            if l % 2:
                arrangements = -arrangements
            total = total + XFloat.from_int(arrangements) * eval_poly(
                self.poly(k - 1 - l), ll2, self.constants.B
            )
        return total * a

    def weighted_main_term(self, k, s, x):
        """Main term of the ln^s-weighted sum, including the f(2) ln^(s-1) 2
        boundary constant."""
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        if s < 1:
            raise DomainError("s = 0 is the unweighted sum; use main_term")
        self._check_x(x)
        lnx = xln(XFloat(float(x)))
        ll = xln(lnx)
        main = self._alternating_main(k, s, ll) * powi(lnx, s)
        return main + self.boundary_constant(k) * powi(self.constants.a, s - 1)

    def normalized_main(self, k, s, x, sqrt_mode=False):
        """Main term of the weighted sum normalized by ln^s x; with sqrt_mode
        the tuples run to sqrt(x), giving a 1/2^s factor and a loglog sqrt(x)
        argument."""
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        if s < 1:
            raise DomainError("s = 0 is the unweighted sum; use main_term")
        self._check_x(x)
        if sqrt_mode:
            ll = xln(xln(XFloat(float(x))) * XFloat(0.5))
            return self._alternating_main(k, s, ll) / XFloat.from_int(2**s)
        return self._alternating_main(k, s, loglog(x))


# ---------------------------------------------------------------------------
# Decomposition and limit checks for the proof-level sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionParts:
    """The split-identity pieces at y = sqrt(x) with polynomial inner sums."""

    A: XFloat
    Bsum: XFloat
    C: XFloat
    S: XFloat
    residual: XFloat


def sqrt_floor(x):
    """Largest integer m with m*m <= x (exact for real x)."""
    return math.isqrt(math.floor(x))


def decomposition_check(table, predictor, k, x, threads=1):
    """Evaluate A + Bsum - C against the exact sum S.

    A    = sum_{p<=sqrt(x)} (1/p) P_(k-1)(loglog(x/p))
    Bsum = sum_{(k-1)-tuples q<=sqrt(x)} (1/q) P_1(loglog(x/q))
    C    = P_1(loglog sqrt(x)) P_(k-1)(loglog sqrt(x))
    """
    if k < 2:
        raise DomainError(f"decomposition needs k >= 2, got {k}")
    if not x >= 4:
        raise DomainError(f"x must be >= 4, got {x}")
    m = sqrt_floor(x)
    _require_primes(table, m)
    X = math.floor(x)
    _require_primes(table, X >> (k - 1))
    B = predictor.constants.B
    pk1 = predictor.poly(k - 1)
    p1 = predictor.poly(1)
    xd = XFloat(float(x))

    n = table.count_leq(m)
    primes = table.primes
    recip = table.recip
    a_val = ZERO
    for i in range(n):
        ll = xln(xln(xd / XFloat.from_int(int(primes[i]))))
        a_val = a_val + XFloat(recip[i]) * eval_poly(pk1, ll, B)

    b_parts = []

    def walk(bud, d, q, rp):
        cap_d = bud >> (d - 1)
        for i in range(n):
            p = int(primes[i])
            if p > cap_d:
                break
            if d == 1:
                ll = xln(xln(xd / XFloat.from_int(q * p)))
                b_parts.append(XFloat(rp * recip[i]) * eval_poly(p1, ll, B))
            else:
                walk(bud // p, d - 1, q * p, rp * recip[i])

    walk(m, k - 1, 1, 1.0)
    b_val = ZERO
    for v in b_parts:
        b_val = b_val + v

    ll_sqrt = xln(xln(xd) * XFloat(0.5))
    c_val = eval_poly(p1, ll_sqrt, B) * eval_poly(pk1, ll_sqrt, B)
    s_val = sum_enumerate(table, SumSpec(k=k, s=0, x=x), threads=threads).value
    return DecompositionParts(
        A=a_val,
        Bsum=b_val,
        C=c_val,
        S=s_val,
        residual=s_val - (a_val + b_val - c_val),
    )


def log_ratio_power_sum(table, m, x):
    """sum_{p<=sqrt(x)} (1/p) [ln(1 - ln p / ln x)]^m; tends to the closed
    log-power integral as x grows."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not x >= 4:
        raise DomainError(f"x must be >= 4, got {x}")
    mm = sqrt_floor(x)
    _require_primes(table, mm)
    n = table.count_leq(mm)
    lnx = math.log(x)
    recip = table.recip
    logp = table.logp
    a_hi = 0.0
    a_lo = 0.0
    for i in range(n):
        u = math.log1p(-(logp[i] / lnx))
        w = u
        for _ in range(m - 1):
            w = w * u
        w = w * recip[i]
        t = a_hi + w
        bb = t - a_hi
        e = (a_hi - (t - bb)) + (w - bb)
        lo2 = a_lo + e
        a_hi = t + lo2
        a_lo = lo2 - (a_hi - t)
    return XFloat(a_hi, a_lo)


def loglog_power_sum(table, m, x):
    """sum_{p<=sqrt(x)} (1/p) [loglog(x/p)]^m (exact side)."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not x >= 4:
        raise DomainError(f"x must be >= 4, got {x}")
    mm = sqrt_floor(x)
    _require_primes(table, mm)
    n = table.count_leq(mm)
    primes = table.primes
    if n and x / float(primes[n - 1]) <= _E:
        raise DomainError(
            f"x/p must exceed e for every p <= sqrt(x); x = {x} is too small"
        )
    recip = table.recip
    a_hi = 0.0
    a_lo = 0.0
    for i in range(n):
        u = math.log(math.log(x / float(primes[i])))
        w = u
        for _ in range(m - 1):
            w = w * u
        w = w * recip[i]
        t = a_hi + w
        bb = t - a_hi
        e = (a_hi - (t - bb)) + (w - bb)
        lo2 = a_lo + e
        a_hi = t + lo2
        a_lo = lo2 - (a_hi - t)
    return XFloat(a_hi, a_lo)


def loglog_power_main(predictor, m, x):
    """Predicted main term of loglog_power_sum:

    (loglog x)^m P_1(loglog sqrt(x))
    + sum_{t=1}^m C(m,t) (loglog x)^(m-t) I_t,
    with I_t the closed log-power integrals.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not x > _E:
        raise DomainError(f"main term needs x > e, got {x}")
    ll = loglog(x)
    ll_sqrt = xln(xln(XFloat(float(x))) * XFloat(0.5))
    total = powi(ll, m) * eval_poly(predictor.poly(1), ll_sqrt, predictor.constants.B)
    for t in range(1, m + 1):
        total = total + XFloat.from_int(math.comb(m, t)) * powi(
            ll, m - t
        ) * log_power_integral_closed(t)
    return total
