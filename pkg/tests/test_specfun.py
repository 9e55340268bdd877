"""Special-function layer: reference values, Wronskians, zeros, interlacing."""

import math

import numpy as np
import pytest
from scipy import integrate

from ctinv.errors import DomainError
from ctinv.specfun import (
    bessel_jy,
    cross_wronskian,
    interlacing_check,
    positive_zeros,
    riccati,
)

# Frozen arbitrary-precision reference values (30-digit evaluation, rounded).
# (nu, x) -> (J, Y, J', Y')
JY_REFERENCE = {
    (1.7, 5.0): (
        -0.085089767345250387,
        0.35626412768764787,
        -0.32870939576268643,
        -0.12006835425857174,
    ),
    (0.3, 0.7): (
        0.73859182062021894,
        -0.54790720456686491,
        0.10904603234181652,
        1.1504456009341297,
    ),
}

# First three zeros of J, Y, J', Y' at nu = 1.7, same provenance.
ZEROS_17 = {
    "j": (4.7522904823032044, 8.0039489778639873, 11.192057599397546),
    "y": (3.0342402517804444, 6.392276860302425, 9.6018841984439582),
    "jp": (2.7003104414199931, 6.302216136971262, 9.5464777262697161),
    "yp": (4.6160162632163612, 7.9356316556536443, 11.145298098570704),
}


def test_bessel_jy_reference_values():
    for (nu, x), (j, y, jp, yp) in JY_REFERENCE.items():
        J, Y, Jp, Yp = bessel_jy(nu, x)
        assert abs(J - j) < 1e-12 * abs(j)
        assert abs(Y - y) < 1e-12 * abs(y)
        assert abs(Jp - jp) < 1e-12 * abs(jp)
        assert abs(Yp - yp) < 1e-12 * abs(yp)


def test_bessel_jy_half_integer_closed_forms():
    x = np.array([0.3, 0.9, 2.0, 7.5, 20.0])
    fac = np.sqrt(2.0 / (np.pi * x))
    s, c = np.sin(x), np.cos(x)
    closed = {
        0.5: (fac * s, -fac * c),
        1.5: (fac * (s / x - c), fac * (-c / x - s)),
        2.5: (
            fac * ((3 / x**2 - 1) * s - 3 * c / x),
            fac * (-(3 / x**2 - 1) * c - 3 * s / x),
        ),
    }
    for nu, (jref, yref) in closed.items():
        J, Y, _, _ = bessel_jy(nu, x)
        assert np.max(np.abs(J - jref) / np.abs(jref)) < 1e-12
        assert np.max(np.abs(Y - yref) / np.abs(yref)) < 1e-12


def test_riccati_order_zero_and_one():
    x = np.linspace(0.2, 30.0, 200)
    f0 = riccati(0.0, x)
    assert np.max(np.abs(f0.u - np.sin(x))) < 1e-13
    assert np.max(np.abs(f0.v + np.cos(x))) < 1e-13
    assert np.max(np.abs(f0.du - np.cos(x))) < 1e-13
    assert np.max(np.abs(f0.dv - np.sin(x))) < 1e-13
    f1 = riccati(1.0, x)
    assert np.max(np.abs(f1.u - (np.sin(x) / x - np.cos(x)))) < 1e-12
    assert np.max(np.abs(f1.v - (-np.cos(x) / x - np.sin(x)))) < 1e-12


def test_riccati_wronskian_random():
    # 10^4 points: u v' - u' v = 1 everywhere, including near the -1/2 edge
    rng = np.random.default_rng(20260825)
    lams = rng.uniform(-0.49, 8.0, size=50)
    worst = 0.0
    for lam in lams:
        x = rng.uniform(0.05, 60.0, size=200)
        f = riccati(float(lam), x)
        worst = max(worst, float(np.max(np.abs(f.u * f.dv - f.du * f.v - 1.0))))
    assert worst < 1e-9


def test_bessel_wronskian_random():
    rng = np.random.default_rng(11)
    nus = rng.uniform(0.0, 8.0, size=50)
    worst = 0.0
    for nu in nus:
        x = rng.uniform(0.05, 60.0, size=200)
        J, Y, Jp, Yp = bessel_jy(float(nu), x)
        w = J * Yp - Jp * Y
        ref = 2.0 / (np.pi * x)
        worst = max(worst, float(np.max(np.abs(w - ref) / ref)))
    assert worst < 1e-9


def test_positive_zeros_half_integer():
    zj = positive_zeros("j", 0.5, 3)
    assert np.max(np.abs(zj - np.array([np.pi, 2 * np.pi, 3 * np.pi]))) < 1e-10
    zy = positive_zeros("y", 0.5, 2)
    assert np.max(np.abs(zy - np.array([np.pi / 2, 3 * np.pi / 2]))) < 1e-10


def test_positive_zeros_residual_and_order():
    z = positive_zeros("j", 1.3, 5)
    assert np.all(np.diff(z) > 0)
    J, _, _, _ = bessel_jy(1.3, z)
    assert np.max(np.abs(J)) < 1e-9


def test_positive_zeros_frozen_reference():
    for kind, ref in ZEROS_17.items():
        z = positive_zeros(kind, 1.7, 3)
        assert np.max(np.abs(z - np.array(ref))) < 1e-10


def test_jy_zeros_alternate():
    # classical Sturm interlacing: y_1 < j_1 < y_2 < j_2 < ...
    for nu in (0.0, 0.5, 1.3, 2.7):
        zj = positive_zeros("j", nu, 8)
        zy = positive_zeros("y", nu, 8)
        merged = np.empty(16)
        merged[0::2] = zy
        merged[1::2] = zj
        assert np.all(np.diff(merged) > 0)


def test_positive_zeros_errors():
    with pytest.raises(DomainError):
        positive_zeros("q", 1.0, 2)
    with pytest.raises(DomainError):
        positive_zeros("j", 1.0, 0)
    with pytest.raises(DomainError):
        positive_zeros("j", -0.1, 2)


def test_riccati_domain_errors():
    with pytest.raises(DomainError):
        riccati(-0.5, 1.0)
    with pytest.raises(DomainError):
        riccati(0.0, 0.0)
    with pytest.raises(DomainError):
        riccati(0.0, -2.0)


def test_interlacing_holds_up_to_unit_shift():
    for nu in (0.0, 0.5, 1.3, 2.7):
        for eps in (0.25, 0.5, 1.0):
            res = interlacing_check(nu, eps, depth=8)
            assert res.holds, (nu, eps, res.relation)
            assert res.violated_at is None


def test_interlacing_violated_beyond_unit_shift():
    for nu in (0.0, 0.5, 1.3, 2.7):
        for eps in (1.2, 1.5):
            res = interlacing_check(nu, eps, depth=50)
            assert not res.holds, (nu, eps)
            assert res.violated_at is not None and res.violated_at <= 50
            assert res.relation  # names the first failing comparison


def test_interlacing_depth_guard():
    with pytest.raises(DomainError):
        interlacing_check(0.5, 0.5, depth=1)


def test_cross_wronskian_same_order_is_one():
    x = np.linspace(0.3, 40.0, 100)
    for lam in (0.0, 0.7, 2.4):
        w = cross_wronskian(lam, lam, x)
        assert np.max(np.abs(w - 1.0)) < 1e-10


def test_cross_wronskian_large_x_limit():
    # tends to cos((ell - L) pi / 2); adjacent integer orders -> 0
    x = np.array([2000.0, 5000.0])
    w = cross_wronskian(1.0, 2.0, x)
    assert np.max(np.abs(w - math.cos(-math.pi / 2))) < 2e-3
    w2 = cross_wronskian(0.6, 0.0, np.array([5000.0]))
    assert abs(w2[0] - math.cos(-0.6 * math.pi / 2)) < 1e-3


def test_cross_wronskian_quadrature_identity():
    # d/dx [u_L v_l' - u_L' v_l] = (l(l+1) - L(L+1)) u_L v_l / x^2, and the
    # Wronskian vanishes at 0 for L > l, so the quadrature recovers it.
    big_l, ell = 0.6, 0.0
    den = ell * (ell + 1) - big_l * (big_l + 1)

    def integrand(rho):
        return riccati(big_l, rho).u * riccati(ell, rho).v / rho**2

    for x in (0.5, 2.0, 12.0, 50.0):
        val, _ = integrate.quad(integrand, 0.0, x, limit=400, epsabs=1e-12, epsrel=1e-12)
        assert abs(val * den - cross_wronskian(big_l, ell, x)) < 1e-7


def test_riccati_array_shapes():
    f = riccati(1.3, np.linspace(0.5, 3.0, 7))
    assert f.u.shape == (7,)
    g = riccati(1.3, 2.0)
    assert np.ndim(g.u) == 0
