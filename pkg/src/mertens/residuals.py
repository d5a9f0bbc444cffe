"""Residual tables and implied-constant estimation over x-grids.

Turns the asymptotic claims into measurable artifacts: exact sum minus
predicted main term, scaled by the shape of the corresponding error term:

* unweighted (s = 0): residual * ln x / (loglog x)^(k-1)
* weighted  (s >= 1): residual / (ln^(s-1) x * (loglog x)^k)
"""

import math
from dataclasses import dataclass

from .errors import DomainError, VerificationError
from .sums import Method, SumSpec, compute_sum
from .xfloat import XFloat, ln as xln, powi

_E2 = math.e**2


@dataclass(frozen=True)
class GridSpec:
    """Geometric grid of evaluation points."""

    x_min: float
    x_max: float
    points: int
    spacing: str = "geometric"

    def __post_init__(self):
        if self.spacing != "geometric":
            raise DomainError(f"unsupported spacing {self.spacing!r}")
        if not self.x_min > _E2:
            raise DomainError(f"x_min must exceed e^2, got {self.x_min}")
        if not self.x_max > self.x_min:
            raise DomainError("x_max must exceed x_min")
        if self.points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.points}")

    def values(self):
        ratio = (self.x_max / self.x_min) ** (1.0 / (self.points - 1))
        xs = [self.x_min * ratio**i for i in range(self.points)]
        xs[-1] = self.x_max
        return xs


@dataclass(frozen=True)
class ResidualRow:
    k: int
    s: int
    x: float
    exact: XFloat
    prediction: XFloat
    residual: XFloat
    scaled: XFloat


def _scale_residual(k, s, x, residual):
    lnx = xln(XFloat(float(x)))
    ll = xln(lnx)
    if s == 0:
        return residual * lnx / powi(ll, k - 1)
    return residual / (powi(lnx, s - 1) * powi(ll, k))


_METHODS = {
    "enumerate": Method.ENUMERATE,
    "multiset": Method.MULTISET,
    "hyperbola": Method.HYPERBOLA,
}


def _exact_value(table, k, s, x, method, threads):
    if method == "all":
        results = {}
        for name, meth in _METHODS.items():
            if meth is Method.HYPERBOLA and k < 2:
                continue
            results[name] = compute_sum(
                table, SumSpec(k=k, s=s, x=x, method=meth), threads=threads
            )
        ref = results["enumerate"]
        for name, sv in results.items():
            diff = abs(float(sv.value - ref.value))
            tol = 1e-12 * max(1.0, abs(float(ref.value)))
            if diff > tol:
                raise VerificationError(
                    f"method {name} disagrees with enumerate at x={x}: {diff:g}"
                )
        return ref
    meth = _METHODS.get(method)
    if meth is None:
        raise DomainError(f"unknown method {method!r}")
    return compute_sum(table, SumSpec(k=k, s=s, x=x, method=meth), threads=threads)


def residual_table(table, predictor, k, s, grid, method="enumerate", threads=1):
    """One ResidualRow per grid point, ordered by x ascending."""
    rows = []
    for x in grid.values():
        exact = _exact_value(table, k, s, x, method, threads).value
        if s == 0:
            prediction = predictor.main_term(k, x)
        else:
            prediction = predictor.weighted_main_term(k, s, x)
        residual = exact - prediction
        rows.append(
            ResidualRow(
                k=k,
                s=s,
                x=x,
                exact=exact,
                prediction=prediction,
                residual=residual,
                scaled=_scale_residual(k, s, x, residual),
            )
        )
    return rows


def implied_constant(rows):
    """max |scaled| over rows; the empirical stand-in for the big-O constant."""
    if not rows:
        raise DomainError("implied_constant needs at least one row")
    ks = {(r.k, r.s) for r in rows}
    if len(ks) > 1:
        raise DomainError(f"rows mix scalings {sorted(ks)}; refuse to aggregate")
    return max(abs(r.scaled) for r in rows)


@dataclass(frozen=True)
class ConvergenceReport:
    k: int
    s: int
    rows: tuple
    max_scaled: XFloat
    slope: float
    flag: str


def convergence_report(table, predictor, k, s, grid, method="enumerate", threads=1):
    """Rows plus summary: max scaled residual, the least-squares slope of
    log|residual| against log x, and a convergence flag.

    The flag applies only to the unweighted sums, whose residual shrinks like
    loglog^(k-1)/log; it is CONVERGENT when |residual| decreases from the
    first grid point to the last.  Weighted-sum residuals grow by design, so
    the growth is recorded without a flag.
    """
    rows = residual_table(table, predictor, k, s, grid, method, threads)
    pts = [
        (math.log(r.x), math.log(abs(float(r.residual))))
        for r in rows
        if float(r.residual) != 0.0
    ]
    slope = 0.0
    if len(pts) >= 2:
        n = len(pts)
        mx = sum(p[0] for p in pts) / n
        my = sum(p[1] for p in pts) / n
        den = sum((p[0] - mx) ** 2 for p in pts)
        slope = sum((p[0] - mx) * (p[1] - my) for p in pts) / den
    if s == 0:
        first = abs(float(rows[0].residual))
        last = abs(float(rows[-1].residual))
        flag = "CONVERGENT" if last < first else "NONCONVERGENT"
    else:
        flag = "NOT_APPLICABLE"
    return ConvergenceReport(
        k=k,
        s=s,
        rows=tuple(rows),
        max_scaled=implied_constant(rows),
        slope=slope,
        flag=flag,
    )
