"""Prediction polynomials for the multiple prime-reciprocal sums.

The degree-k main-term polynomial is monic in the shifted variable u = y + B
(B the Mertens constant) with a zero u^(k-1) coefficient:

    u^k + sum_{m=2}^{k} C(k,m) a_m u^(k-m),

where a_2 = -zeta(2), a_3 = 2 zeta(3), a_4 = 3 zeta(2)^2 - 6 zeta(4) and a_k
for k > 4 follows a zeta-value recurrence.  Three independent constructions
are exposed: the closed coefficient form, a product/convolution recursion
using only zeta values, and a plain-basis route through the Taylor expansion
of the reciprocal gamma function.  Desk-scale comparisons of the routes are
the point, so everything is double-double.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import euler_gamma, zeta_int
from .xfloat import ONE, XFloat, ZERO, powi

MAX_KMAX = 24  # (k-1)! zeta(k) nears 1e22 here; beyond that dd digits thin out
MAX_GAMMA_K = 12
MAX_GAMMA_DERIV = 20


@dataclass(frozen=True)
class ShiftedPoly:
    """Coefficient vector in the shifted basis: coeffs[j] multiplies u^j."""

    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [ZERO] * (n - len(other.coeffs))
        return ShiftedPoly(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other):
        if isinstance(other, XFloat):
            return ShiftedPoly(tuple(c * other for c in self.coeffs))
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] = out[i + j] + ci * cj
        return ShiftedPoly(tuple(out))

    def eval_u(self, u):
        """Horner evaluation at the shifted variable u."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * u + c
        return acc


@dataclass(frozen=True)
class CoeffSequence:
    """a_2 .. a_kmax, indexed by k."""

    kmax: int
    values: tuple

    def __getitem__(self, k):
        if not 2 <= k <= self.kmax:
            raise DomainError(f"coefficient index {k} outside [2, {self.kmax}]")
        return self.values[k - 2]


@dataclass(frozen=True)
class GammaPolyTable:
    """Plain-basis coefficients of the degree-k prediction polynomial,
    built from reciprocal-gamma derivatives; coeffs[j] multiplies y^j."""

    k: int
    coeffs: tuple


def coeff_from_recurrence(k, lower):
    """a_k from the zeta recurrence, given a_2..a_(k-1) in `lower`:

    a_k = sum_{i=1}^{k-3} (-1)^i C(k-1,i) i! zeta(i+1) a_{k-1-i}
          + (-1)^(k-1) (k-1)! zeta(k).
    """
    if k < 3:
        raise DomainError(f"recurrence needs k >= 3, got {k}")
    total = ZERO
    for i in range(1, k - 2):
        factor = math.comb(k - 1, i) * math.factorial(i)
        if i % 2:
            factor = -factor
        total = total + XFloat.from_int(factor) * zeta_int(i + 1) * lower[k - 1 - i]
    tail = math.factorial(k - 1)
    if k % 2 == 0:
        tail = -tail
    return total + XFloat.from_int(tail) * zeta_int(k)


def coeff_seq(kmax):
    """Build a_2..a_kmax: explicit values through a_4, recurrence beyond."""
    if not 2 <= kmax <= MAX_KMAX:
        raise DomainError(f"kmax must be in [2, {MAX_KMAX}], got {kmax}")
    values = [-zeta_int(2)]
    if kmax >= 3:
        values.append(XFloat(2.0) * zeta_int(3))
    if kmax >= 4:
        values.append(
            XFloat(3.0) * zeta_int(2) * zeta_int(2) - XFloat(6.0) * zeta_int(4)
        )
    seq = CoeffSequence(kmax=min(kmax, 4), values=tuple(values))
    for k in range(5, kmax + 1):
        values.append(coeff_from_recurrence(k, seq))
        seq = CoeffSequence(kmax=k, values=tuple(values))
    return seq


def prediction_poly(k, seq):
    """Closed-form shifted-basis polynomial of degree k."""
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if k == 0:
        return ShiftedPoly((ONE,))
    if k == 1:
        return ShiftedPoly((ZERO, ONE))
    if k > seq.kmax:
        raise DomainError(f"degree {k} exceeds coefficient range {seq.kmax}")
    coeffs = [ZERO] * (k + 1)
    coeffs[k] = ONE
    for m in range(2, k + 1):
        coeffs[k - m] = XFloat.from_int(math.comb(k, m)) * seq[m]
    return ShiftedPoly(tuple(coeffs))


def prediction_poly_recursive(k):
    """Same polynomial by the product recursion, from zeta values alone:

    P_k = P_1 P_{k-1} + sum_{t=1}^{k-1} C(k-1,t) (-1)^t t! zeta(t+1) P_{k-1-t}.
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if k > MAX_KMAX:
        raise DomainError(f"degree {k} exceeds maximum {MAX_KMAX}")
    polys = [ShiftedPoly((ONE,)), ShiftedPoly((ZERO, ONE))]
    for kk in range(2, k + 1):
        acc = polys[1] * polys[kk - 1]
        for t in range(1, kk):
            factor = math.comb(kk - 1, t) * math.factorial(t)
            if t % 2:
                factor = -factor
            acc = acc + polys[kk - 1 - t] * (XFloat.from_int(factor) * zeta_int(t + 1))
        polys.append(acc)
    return polys[k]


def shift_poly(poly, c):
    """Compose with a shift of the variable: returns Q with Q(u) = P(u - c)."""
    c = c if isinstance(c, XFloat) else XFloat(float(c))
    n = poly.degree
    out = [ZERO] * (n + 1)
    neg_c_pow = [ONE]
    for _ in range(n):
        neg_c_pow.append(neg_c_pow[-1] * (-c))
    for i, ci in enumerate(poly.coeffs):
        for j in range(i + 1):
            out[j] = out[j] + ci * XFloat.from_int(math.comb(i, j)) * neg_c_pow[i - j]
    return ShiftedPoly(tuple(out))


def to_plain_basis(poly, B):
    """Coefficients in powers of y, substituting u = y + B."""
    return shift_poly(poly, -B)


def eval_poly(poly, y, B):
    """Evaluate at u = y + B (y may be a float or an XFloat)."""
    y = y if isinstance(y, XFloat) else XFloat(float(y))
    return poly.eval_u(y + B)


def inv_gamma_taylor(mmax):
    """Derivatives of 1/Gamma at 1: returns [d_0..d_mmax], d_m = (1/Gamma)^(m)(1).

    From 1/Gamma(1+z) = exp(gamma z + sum_{j>=2} (-1)^(j-1) zeta(j) z^j / j),
    exponentiated as a power series; d_m = m! c_m.
    """
    if not 1 <= mmax <= MAX_GAMMA_DERIV:
        raise DomainError(f"mmax must be in [1, {MAX_GAMMA_DERIV}], got {mmax}")
    g = [ZERO, euler_gamma()]
    for j in range(2, mmax + 1):
        sign = 1 if j % 2 else -1
        g.append(XFloat.from_int(sign) * zeta_int(j) / XFloat.from_int(j))
    c = [ONE]
    for m in range(1, mmax + 1):
        acc = ZERO
        for j in range(1, m + 1):
            acc = acc + XFloat.from_int(j) * g[j] * c[m - j]
        c.append(acc / XFloat.from_int(m))
    return [XFloat.from_int(math.factorial(m)) * c[m] for m in range(mmax + 1)]


def gamma_poly_table(k, constants):
    """Plain-basis prediction coefficients from the reciprocal-gamma route:

    coeff[j] = sum_{m=0}^{k-j} multinomial(k; m, j, k-m-j)
               (B - gamma)^(k-m-j) (1/Gamma)^(m)(1).
    """
    if not 1 <= k <= MAX_GAMMA_K:
        raise DomainError(f"k must be in [1, {MAX_GAMMA_K}], got {k}")
    derivs = inv_gamma_taylor(k)
    w = constants.B - constants.gamma
    w_pow = [ONE]
    for _ in range(k):
        w_pow.append(w_pow[-1] * w)
    coeffs = []
    for j in range(k + 1):
        acc = ZERO
        for m in range(0, k - j + 1):
            r = k - m - j
            mult = math.factorial(k) // (
                math.factorial(m) * math.factorial(j) * math.factorial(r)
            )
            acc = acc + XFloat.from_int(mult) * w_pow[r] * derivs[m]
        coeffs.append(acc)
    return GammaPolyTable(k=k, coeffs=tuple(coeffs))


# powi is re-used by callers evaluating simple powers of dd values
__all__ = [
    "ShiftedPoly",
    "CoeffSequence",
    "GammaPolyTable",
    "coeff_seq",
    "coeff_from_recurrence",
    "prediction_poly",
    "prediction_poly_recursive",
    "shift_poly",
    "to_plain_basis",
    "eval_poly",
    "inv_gamma_taylor",
    "gamma_poly_table",
    "powi",
]
