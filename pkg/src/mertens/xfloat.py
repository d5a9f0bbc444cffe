"""Double-double arithmetic: the extended-precision carrier for the library.

An XFloat is an unevaluated sum ``hi + lo`` of two machine floats with
``|lo| <= ulp(hi)/2``, giving roughly 31 significant decimal digits.  The
error-free transformations (two_sum, two_prod via Dekker splitting) are the
standard building blocks; see Dekker (1971) and the QD library conventions.
"""

import math
from decimal import Decimal, localcontext

from .errors import DomainError

_SPLITTER = 134217729.0  # 2^27 + 1, exact in a double

# ln 2 split into two doubles (hi + lo accurate to ~5.7e-34)
_LN2_HI = 0.6931471805599453
_LN2_LO = 2.3190468138462996e-17


def two_sum(a, b):
    """Error-free sum: returns (s, e) with s = fl(a+b) and s + e == a + b."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    """Error-free sum assuming |a| >= |b|."""
    s = a + b
    return s, b - (s - a)


def split(a):
    """Dekker split of a double into two 26-bit halves."""
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Error-free product: returns (p, e) with p = fl(a*b) and p + e == a * b."""
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


class XFloat:
    """Immutable double-double value.

    All arithmetic renormalizes so that hi = fl(hi + lo); mixing with plain
    ints/floats promotes them exactly.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi=0.0, lo=0.0):
        s, e = two_sum(float(hi), float(lo))
        object.__setattr__(self, "hi", s)
        object.__setattr__(self, "lo", e)

    def __setattr__(self, name, value):
        raise AttributeError("XFloat is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_int(cls, n):
        """Exact two-float representation of a Python int (|n| < 2^106-ish)."""
        hi = float(n)
        lo = float(n - int(hi))
        return cls(hi, lo)

    @classmethod
    def from_decimal_string(cls, s):
        with localcontext() as ctx:
            ctx.prec = 60
            d = Decimal(s)
            hi = float(d)
            lo = float(d - Decimal(hi))
        return cls(hi, lo)

    @staticmethod
    def _coerce(x):
        if isinstance(x, XFloat):
            return x
        if isinstance(x, int):
            return XFloat.from_int(x)
        if isinstance(x, float):
            return XFloat(x)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        s1, s2 = two_sum(self.hi, o.hi)
        t1, t2 = two_sum(self.lo, o.lo)
        s2 += t1
        s1, s2 = quick_two_sum(s1, s2)
        s2 += t2
        hi, lo = quick_two_sum(s1, s2)
        return XFloat(hi, lo)

    __radd__ = __add__

    def __neg__(self):
        return XFloat(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p1, p2 = two_prod(self.hi, o.hi)
        p2 += self.hi * o.lo + self.lo * o.hi
        hi, lo = quick_two_sum(p1, p2)
        return XFloat(hi, lo)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        q1 = self.hi / o.hi
        r = self - o * XFloat(q1)
        q2 = r.hi / o.hi
        r = r - o * XFloat(q2)
        q3 = r.hi / o.hi
        s, e = quick_two_sum(q1, q2)
        return XFloat(s, e) + q3

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __abs__(self):
        return XFloat(-self.hi, -self.lo) if self.hi < 0 else self

    def __pow__(self, n):
        if isinstance(n, int):
            return powi(self, n)
        return exp(ln(self) * XFloat(float(n)))

    # -- comparisons (normalized => lexicographic on (hi, lo)) -------------

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.hi != o.hi:
            return -1 if self.hi < o.hi else 1
        if self.lo != o.lo:
            return -1 if self.lo < o.lo else 1
        return 0

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    # -- conversion ---------------------------------------------------------

    def __float__(self):
        return self.hi + self.lo

    def __repr__(self):
        return f"XFloat({self.hi!r}, {self.lo!r})"

    def to_decimal_string(self, digits=31):
        """Decimal string with `digits` significant digits (exact conversion)."""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            d = Decimal(self.hi) + Decimal(self.lo)
            if d == 0:
                return "0"
            return format(d, f".{digits - 1}e")


ZERO = XFloat(0.0)
ONE = XFloat(1.0)
LN2 = XFloat(_LN2_HI, _LN2_LO)


def powi(x, n):
    """x**n for integer n by binary exponentiation."""
    if n == 0:
        return ONE
    if n < 0:
        return ONE / powi(x, -n)
    result = ONE
    base = x
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def exp(x):
    """exp of an XFloat via ln2 reduction, scaled Taylor series, and squaring."""
    xf = XFloat._coerce(x)
    if xf.hi > 700.0:
        return XFloat(math.inf)
    if xf.hi < -745.0:
        return ZERO
    k = round(xf.hi / _LN2_HI)
    r = xf - LN2 * XFloat(float(k))
    # |r| <= ln2/2; scale by 2^-9 so Taylor converges in ~12 terms
    r = XFloat(math.ldexp(r.hi, -9), math.ldexp(r.lo, -9))
    term = r
    total = ONE + r
    for j in range(2, 13):
        term = term * r / XFloat(float(j))
        total = total + term
    for _ in range(9):
        total = total * total
    return XFloat(math.ldexp(total.hi, k), math.ldexp(total.lo, k))


def ln(x):
    """Natural log of an XFloat via one Newton step on a float seed."""
    xf = XFloat._coerce(x)
    if xf.hi <= 0.0:
        raise DomainError(f"log of non-positive value {xf.hi}")
    a0 = math.log(xf.hi)
    r = xf * exp(XFloat(-a0)) - ONE
    # ln(1 + r) with |r| ~ 1e-16: quadratic term suffices at dd precision
    return XFloat(a0) + r - r * r * XFloat(0.5)


def pairwise_sum(values):
    """Sum a list of XFloats pairwise (error grows like log n, not n)."""
    vals = list(values)
    if not vals:
        return ZERO
    while len(vals) > 1:
        merged = []
        for i in range(0, len(vals) - 1, 2):
            merged.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            merged.append(vals[-1])
        vals = merged
    return vals[0]
