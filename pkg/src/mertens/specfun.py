"""Extended-precision special values: zeta at integers, Li_n(1/2), the
log-power integrals over (0, 1/2], the Mertens constant, and Euler's gamma.

Everything returns XFloat.  Series are summed pairwise in double-double so
rounding grows like log(n); truncation tails are corrected by a midpoint
Euler-Maclaurin estimate with four derivative terms.
"""

import functools
import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import AccuracyError, ConvergenceError, DomainError
from .xfloat import LN2, ONE, XFloat, ln as xln, pairwise_sum, powi

ZETA_MIN_N = 2
ZETA_MAX_N = 64
_SERIES_CUTOFF = 1000
# B_{2j}(1/2) = (2^(1-2j) - 1) B_{2j} as exact fractions, j = 1..4
_BERNOULLI_HALF = ((-1, 12), (7, 240), (-31, 1344), (127, 3840))

INTEGRAL_MAX_M = 32
_QUAD_SPLIT = 1e-8  # below this the integrand is evaluated by its series


@functools.lru_cache(maxsize=None)
def zeta_int(n):
    """Riemann zeta at an integer n >= 2: direct series plus a tail estimate.

    Relative error <= 1e-28 over 2 <= n <= 64.
    """
    if not 2 <= n <= ZETA_MAX_N:
        raise DomainError(f"zeta_int needs 2 <= n <= {ZETA_MAX_N}, got {n}")
    terms = []
    last_k = _SERIES_CUTOFF
    for k in range(1, _SERIES_CUTOFF + 1):
        denom = k**n
        if denom > 10**36:
            last_k = k - 1
            break
        terms.append(ONE / XFloat.from_int(denom))
    total = pairwise_sum(terms)
    # midpoint Euler-Maclaurin tail from M = last_k + 1/2:
    # sum_{k>N} k^-n = M^(1-n)/(n-1) - sum_j B_{2j}(1/2)/(2j)! * f^(2j-1)(M)
    m2 = XFloat.from_int(2 * last_k + 1) * XFloat(0.5)
    total = total + powi(ONE / m2, n - 1) / XFloat.from_int(n - 1)
    minv = ONE / m2
    for j, (num, den) in enumerate(_BERNOULLI_HALF, start=1):
        rising = 1
        for i in range(2 * j - 1):
            rising *= n + i
        deriv = -(XFloat.from_int(rising) * powi(minv, n + 2 * j - 1))
        coeff = XFloat.from_int(num) / XFloat.from_int(den * math.factorial(2 * j))
        total = total - coeff * deriv
    return total


@functools.lru_cache(maxsize=None)
def polylog_half(n):
    """Li_n(1/2) = sum_{k>=1} 1/(k^n 2^k) for integer n >= 2."""
    if not 2 <= n <= ZETA_MAX_N:
        raise DomainError(f"polylog_half needs 2 <= n <= {ZETA_MAX_N}, got {n}")
    terms = []
    k = 1
    while True:
        denom = k**n * 2**k
        if denom > 10**36:
            break
        terms.append(ONE / XFloat.from_int(denom))
        k += 1
    return pairwise_sum(terms)


def log_power_integral_closed(m):
    """Closed form of the integral of ln^m(1-x)/x over (0, 1/2].

    Equals (-a)^(m+1) + (-1)^m m! zeta(m+1)
    + (-1)^(m-1) sum_{s=1}^m [m!/(m-s)!] a^(m-s) Li_{s+1}(1/2), a = ln 2.
    Cancellation grows like m!, so trustworthy digits shrink for m >~ 20.
    """
    if not 1 <= m <= INTEGRAL_MAX_M:
        raise DomainError(f"integral order must be in [1, {INTEGRAL_MAX_M}], got {m}")
    a = LN2
    sign_m = 1 if m % 2 == 0 else -1
    total = powi(-a, m + 1)
    total = total + XFloat.from_int(sign_m * math.factorial(m)) * zeta_int(m + 1)
    acc = XFloat(0.0)
    for s in range(1, m + 1):
        arrangements = math.factorial(m) // math.factorial(m - s)
        acc = acc + XFloat.from_int(arrangements) * powi(a, m - s) * polylog_half(s + 1)
    return total - XFloat.from_int(sign_m) * acc


def _series_head_integral(m, delta):
    """Integral of ln^m(1-x)/x over (0, delta] by termwise integration.

    ln^m(1-x) = (-1)^m (sum x^j/j)^m = (-1)^m sum_{j>=m} b_j x^j; with
    delta <= 1e-8 four series terms leave a remainder below 1e-40.
    """
    deg = m + 4
    coeffs = [0.0] + [1.0 / j for j in range(1, deg + 1)]
    power = [1.0] + [0.0] * deg
    for _ in range(m):
        nxt = [0.0] * (deg + 1)
        for i, pi_ in enumerate(power):
            if pi_ == 0.0:
                continue
            for j in range(1, deg + 1 - i):
                nxt[i + j] += pi_ * coeffs[j]
        power = nxt
    total = 0.0
    for j in range(m, deg + 1):
        total += power[j] * delta**j / j
    return total if m % 2 == 0 else -total


def log_power_integral_quad(m, tol, max_subdivisions=200):
    """Adaptive-quadrature value of the same integral, absolute error <= tol.

    Independent of the closed form: series head on [0, delta], adaptive
    Gauss-Kronrod on [delta, 1/2].
    """
    if not 1 <= m <= INTEGRAL_MAX_M:
        raise DomainError(f"integral order must be in [1, {INTEGRAL_MAX_M}], got {m}")
    if not 1e-14 <= tol <= 1e-2:
        raise DomainError(f"tol must be in [1e-14, 1e-2], got {tol}")
    head = _series_head_integral(m, _QUAD_SPLIT)

    def integrand(t):
        return math.log1p(-t) ** m / t

    result = quad(
        integrand,
        _QUAD_SPLIT,
        0.5,
        epsabs=0.5 * tol,
        epsrel=0.0,
        limit=max_subdivisions,
        full_output=1,
    )
    value = head + result[0]
    err = result[1]
    if len(result) > 3 or err > tol:
        message = result[3] if len(result) > 3 else f"error estimate {err:g} > {tol:g}"
        raise ConvergenceError(
            f"quadrature did not converge for m={m}: {message}",
            best_estimate=XFloat(value),
            error_estimate=err,
        )
    return XFloat(value)


@functools.lru_cache(maxsize=None)
def euler_gamma():
    """Euler's constant via Euler-Maclaurin on H_n - ln n at n = 10^4.

    gamma = H_n - ln n - 1/(2n) + 1/(12n^2) - 1/(120n^4) + 1/(252n^6) + O(n^-8),
    good to ~34 digits here.
    """
    n = 10**4
    harmonic = pairwise_sum([ONE / XFloat.from_int(i) for i in range(1, n + 1)])
    g = harmonic - xln(XFloat.from_int(n))
    g = g - ONE / XFloat.from_int(2 * n)
    g = g + ONE / XFloat.from_int(12 * n**2)
    g = g - ONE / XFloat.from_int(120 * n**4)
    g = g + ONE / XFloat.from_int(252 * n**6)
    return g


def mertens_constant(limit, table):
    """gamma + sum_{p <= limit} (ln(1 - 1/p) + 1/p) with an integral tail
    estimate; the remaining error is O(1/(limit ln limit)).
    """
    limit = int(limit)
    if limit < 10**3:
        raise AccuracyError(f"mertens_constant needs limit >= 1000, got {limit}")
    if limit > table.limit:
        raise DomainError(f"limit {limit} exceeds table limit {table.limit}")
    n = table.count_leq(limit)
    hi, lo = table.backend.mertens_sum(table.recip[:n])
    # tail: sum_{p>L} (ln(1-1/p) + 1/p) ~ -integral_L^inf dt/(2 t^2 ln t)
    tail = -1.0 / (2.0 * limit * math.log(limit))
    return euler_gamma() + XFloat(hi, lo) + XFloat(tail)


def mertens_constant_error_bound(limit):
    """Documented bound on |mertens_constant(limit) - B|."""
    return 1.0 / (limit * math.log(limit))


@dataclass(frozen=True)
class Constants:
    """Startup bundle: Mertens constant B, Euler gamma, and a = ln 2."""

    B: XFloat
    gamma: XFloat
    a: XFloat
    b_limit: int

    @classmethod
    def compute(cls, table, b_limit=10**6):
        return cls(
            B=mertens_constant(b_limit, table),
            gamma=euler_gamma(),
            a=LN2,
            b_limit=b_limit,
        )


__all__ = [
    "zeta_int",
    "polylog_half",
    "log_power_integral_closed",
    "log_power_integral_quad",
    "euler_gamma",
    "mertens_constant",
    "mertens_constant_error_bound",
    "Constants",
]
