import math

import mpmath as mp
import pytest

from mertens import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    build_sieve,
    euler_gamma,
    log_power_integral_closed,
    log_power_integral_quad,
    mertens_constant,
    polylog_half,
    zeta_int,
)
from mertens.xfloat import LN2, XFloat

# oracle: mpmath at 40 digits (frozen during development)
ZETA2 = XFloat.from_decimal_string("1.6449340668482264364724151666460252")
ZETA3 = XFloat.from_decimal_string("1.20205690315959428539973816151145")
ZETA40 = XFloat.from_decimal_string("1.0000000000009094947840263889282533")
LI2_HALF = XFloat.from_decimal_string("0.58224052646501250590265632015968011")
LI3_HALF = XFloat.from_decimal_string("0.53721319360804020094062322559496583")
GAMMA = XFloat.from_decimal_string("0.57721566490153286060651209008240243")
B_TRUE = XFloat.from_decimal_string("0.26149721284764278375542683860869586")
I2 = XFloat.from_decimal_string("0.189506008460255411443650012841")


def rel(a, b):
    return abs(float(a - b)) / abs(float(b))


@pytest.mark.parametrize(
    "n,ref", [(2, ZETA2), (3, ZETA3), (40, ZETA40)]
)
def test_zeta_frozen(n, ref):
    assert rel(zeta_int(n), ref) < 1e-28


@pytest.mark.parametrize("n", [2, 5, 13, 29, 47, 64])
def test_zeta_against_mpmath(n):
    with mp.workdps(50):
        ref = mp.zeta(n)
        got = mp.mpf(zeta_int(n).hi) + mp.mpf(zeta_int(n).lo)
        assert abs((got - ref) / ref) < 1e-28


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta_int(1)
    with pytest.raises(DomainError):
        zeta_int(65)


def test_zeta_decreasing():
    vals = [zeta_int(n) for n in range(2, 30)]
    for a, b in zip(vals, vals[1:]):
        assert a > b
    assert float(vals[-1]) > 1.0


def test_polylog_frozen():
    assert rel(polylog_half(2), LI2_HALF) < 1e-28
    assert rel(polylog_half(3), LI3_HALF) < 1e-28


def test_polylog_cross_check_closed_form():
    # Li2(1/2) = pi^2/12 - ln^2(2)/2, with pi^2/6 = zeta(2)
    closed = zeta_int(2) * XFloat(0.5) - LN2 * LN2 * XFloat(0.5)
    assert rel(polylog_half(2), closed) < 1e-28


def test_polylog_monotone_to_half():
    vals = [polylog_half(n) for n in range(2, 40)]
    for a, b in zip(vals, vals[1:]):
        assert a > b
    assert abs(float(vals[-1]) - 0.5) < 1e-11


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog_half(1)


def test_integral_closed_m1_is_minus_dilog():
    assert rel(log_power_integral_closed(1), -polylog_half(2)) < 1e-27


def test_integral_closed_m2_frozen():
    assert rel(log_power_integral_closed(2), I2) < 1e-25


def test_integral_sign_alternates():
    for m in range(1, 13):
        v = float(log_power_integral_closed(m))
        assert (v > 0) == (m % 2 == 0)


def test_integral_identity_with_zeta2():
    # -ln^2(2) + 2 * I(1) = -zeta(2)
    lhs = -(LN2 * LN2) + XFloat(2.0) * log_power_integral_closed(1)
    assert abs(float(lhs + zeta_int(2))) < 1e-25


@pytest.mark.parametrize("m", list(range(1, 13)))
def test_quad_matches_closed(m):
    c = float(log_power_integral_closed(m))
    q = float(log_power_integral_quad(m, 1e-12))
    assert abs(c - q) < 1e-10


def test_quad_coarse_tolerance():
    v = float(log_power_integral_quad(1, 1e-2))
    assert abs(v - (-0.5822)) < 1e-2


def test_quad_against_mpmath():
    with mp.workdps(30):
        for m in (1, 5):
            ref = float(mp.quad(lambda t: mp.log(1 - t) ** m / t, [0, mp.mpf(1) / 2]))
            assert abs(float(log_power_integral_quad(m, 1e-12)) - ref) < 1e-10


def test_quad_domain():
    with pytest.raises(DomainError):
        log_power_integral_quad(0, 1e-10)
    with pytest.raises(DomainError):
        log_power_integral_quad(1, 1e-15)
    with pytest.raises(DomainError):
        log_power_integral_quad(1, 0.5)


def test_quad_convergence_error_carries_best_estimate():
    with pytest.raises(ConvergenceError) as exc_info:
        log_power_integral_quad(1, 1e-14, max_subdivisions=1)
    best = exc_info.value.best_estimate
    assert abs(float(best) - (-0.58224)) < 1e-2


def test_euler_gamma():
    assert abs(float(euler_gamma() - GAMMA)) < 1e-25


def test_mertens_constant(table):
    b = mertens_constant(10**6, table)
    assert 0.26149 <= float(b) <= 0.26151
    assert abs(float(b) - 0.2614972) < 1e-6
    assert abs(float(b - B_TRUE)) < 1e-7


def test_mertens_constant_small_limit(table):
    assert abs(float(mertens_constant(10**3, table)) - 0.26150) < 1e-3


def test_mertens_constant_monotone_refinement(table):
    b4 = float(mertens_constant(10**4, table))
    b5 = float(mertens_constant(10**5, table))
    b6 = float(mertens_constant(10**6, table))
    assert abs(b6 - b5) < abs(b5 - b4)


def test_mertens_constant_errors(table):
    with pytest.raises(AccuracyError):
        mertens_constant(999, table)
    with pytest.raises(DomainError):
        mertens_constant(10**6 + 1, table)


def test_mertens_constant_runtime_includes_sieve():
    # fresh sieve + constant well under the desk budget
    t = build_sieve(10**6)
    b = mertens_constant(10**6, t)
    assert 0.26149 <= float(b) <= 0.26151


def test_constants_record(constants):
    assert 0.26 < float(constants.B) < 0.262
    assert 0.577 < float(constants.gamma) < 0.578
    assert constants.a.hi == LN2.hi and constants.a.lo == LN2.lo
    assert constants.b_limit == 10**6
