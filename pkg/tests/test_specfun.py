import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from specpoly.exceptions import DomainError
from specpoly.specfun import (
    EULER_GAMMA,
    bessel_i_scaled,
    bessel_j,
    bessel_zero,
    bessel_zeros_below,
    dedekind_eta,
    dedekind_eta_bounded,
    euler_gamma,
    exp_e1,
    exp_e1_scaled,
    g_function,
    gamma_fn,
    log_dedekind_eta,
)


def test_bessel_j_values():
    assert bessel_j(0, 0) == 1.0
    assert abs(bessel_j(2, 5.1356223)) < 1e-7
    for x in (1.0, 5.0, 20.0):
        h = 1e-5
        d = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2 * h)
        assert abs(bessel_j(1, x) + d) < 1e-8


@pytest.mark.parametrize("nu,x", [(0.5, 3.0), (7.0, 40.0), (120.0, 300.0), (300.0, 320.0), (45.3, 1000.0)])
def test_bessel_j_against_mpmath(nu, x):
    assert abs(bessel_j(nu, x) - float(mpmath.besselj(nu, x))) < 1e-12


def test_bessel_j_integral_representation():
    # integer order: J_n(x) = (1/pi) int_0^pi cos(n s - x sin s) ds
    for n, x in [(0, 2.0), (3, 10.0), (40, 60.0)]:
        val, _ = integrate.quad(lambda s: math.cos(n * s - x * math.sin(s)), 0, math.pi, limit=400, epsabs=1e-14)
        assert abs(bessel_j(n, x) - val / math.pi) < 1e-12


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(1, -1.0)
    with pytest.raises(DomainError):
        bessel_i_scaled(-0.5, 1.0)


def test_bessel_i_scaled_values():
    assert bessel_i_scaled(0, 0) == 1.0
    assert bessel_i_scaled(1, 0) == 0.0
    ref, _ = integrate.quad(lambda p: math.exp(50 * (math.cos(p) - 1)), 0, math.pi, epsabs=1e-15)
    assert abs(bessel_i_scaled(0, 50) - ref / math.pi) < 1e-9
    assert abs(bessel_i_scaled(0, 50) - 1 / math.sqrt(100 * math.pi) * (1 + 1 / 400 + 9 / (128 * 50**2))) < 1e-7


def test_bessel_i_scaled_large_argument_finite():
    v = bessel_i_scaled(np.array([0.0, 10.0, 500.0]), 1e7)
    assert np.all(np.isfinite(v)) and np.all(v > 0)


@pytest.mark.parametrize("u", [0.5, 1.0, 5.0, 20.0])
def test_bessel_i_recurrences(u):
    h = 1e-5
    i0 = lambda s: bessel_i_scaled(0, s) * math.exp(s)  # noqa: E731
    i1 = lambda s: bessel_i_scaled(1, s) * math.exp(s)  # noqa: E731
    d1 = (i1(u + h) - i1(u - h)) / (2 * h)
    d0 = (i0(u + h) - i0(u - h)) / (2 * h)
    scale = math.exp(u)
    assert abs(u * d1 + i1(u) - u * i0(u)) / scale < 1e-6
    assert abs(u * d0 - u * i1(u)) / scale < 1e-6


@given(st.floats(0.0, 200.0), st.floats(0.0, 50.0))
def test_bessel_i_scaled_decreasing_in_order(nu, x):
    assert bessel_i_scaled(nu + 1.0, x) <= bessel_i_scaled(nu, x)


def test_bessel_zero_values():
    assert abs(bessel_zero(0, 1) - 2.404826) < 1e-6
    assert abs(bessel_zero(2, 1) - 5.135622) < 1e-6
    with pytest.raises(DomainError):
        bessel_zero(1, 0)


@pytest.mark.parametrize("nu", [0, 2, 10, 7.5, 150.0])
def test_bessel_zero_against_mpmath_and_ordering(nu):
    zeros = [bessel_zero(nu, n) for n in range(1, 51)]
    assert all(b > a for a, b in zip(zeros, zeros[1:]))
    for n in (1, 2, 17, 50):
        ref = float(mpmath.besseljzero(nu, n))
        assert abs(zeros[n - 1] - ref) < 1e-10 * ref
        assert abs(bessel_j(nu, zeros[n - 1])) < 1e-10 * zeros[n - 1]


def test_bessel_zeros_increase_with_order():
    for n in (1, 5, 20):
        assert bessel_zero(3.0, n) < bessel_zero(3.5, n) < bessel_zero(4.0, n)


def test_bessel_zeros_below_complete():
    zs = bessel_zeros_below(4.0, 100.0)
    ref = [float(mpmath.besseljzero(4, n)) for n in range(1, len(zs) + 2)]
    assert ref[len(zs)] > 100.0
    assert np.allclose(zs, ref[: len(zs)], rtol=1e-12)
    assert len(bessel_zeros_below(50.0, 40.0)) == 0


@pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 25.0])
def test_e1_two_sided_bound(x):
    v = x * math.exp(x) * exp_e1(x)
    assert x / (x + 1) < v < (x + 1) / (x + 2)


def test_e1_values():
    ref, _ = integrate.quad(lambda s: math.exp(-s) / s, 1, math.inf, epsabs=1e-14)
    assert abs(exp_e1(1.0) - ref) < 1e-12
    assert abs(exp_e1(1.0) - 0.2193839) < 1e-6
    assert abs(1e4 * exp_e1_scaled(1e4) - 1) < 1e-3
    for x in (0.3, 49.0, 50.0, 80.0, 1e4):
        ref = float(mpmath.exp(x) * mpmath.e1(x))
        assert abs(exp_e1_scaled(x) / ref - 1) < 1e-13
    with pytest.raises(DomainError):
        exp_e1(0.0)


# above ~1e4 the two bounds differ by less than double resolution
@given(st.floats(1e-3, 1e4))
def test_e1_bound_property(x):
    v = x * exp_e1_scaled(x)
    assert x / (x + 1) < v < (x + 1) / (x + 2)


def test_eta_values():
    assert abs(dedekind_eta(1.0) - 0.7682254) < 1e-6
    assert abs(dedekind_eta(1.0) - gamma_fn(0.25) / (2 * math.pi**0.75)) < 1e-14
    assert abs(dedekind_eta(10.0) / math.exp(-10 * math.pi / 12) - 1) < 1e-8
    b = dedekind_eta_bounded(0.05)
    assert b.absolute_error_bound <= 1e-14
    with pytest.raises(DomainError):
        dedekind_eta(0.0)


@pytest.mark.parametrize("y", [0.5, 2.0, 5.0])
def test_eta_modular_identity(y):
    assert abs(log_dedekind_eta(1 / y) - log_dedekind_eta(y) - 0.5 * math.log(y)) < 1e-10


@settings(max_examples=60)
@given(st.floats(math.log(0.1), math.log(10.0)))
def test_eta_modular_identity_property(logy):
    y = math.exp(logy)
    assert abs(log_dedekind_eta(1 / y) - log_dedekind_eta(y) - 0.5 * math.log(y)) < 1e-10


def test_eta_against_mpmath():
    for y in (0.2, 1.0, 3.0):
        q = mpmath.exp(-2 * mpmath.pi * y)
        ref = mpmath.exp(-mpmath.pi * y / 12) * mpmath.qp(q)
        assert abs(dedekind_eta(y) - float(ref)) < 1e-15


def test_g_function():
    assert g_function(0.0) == 0.0
    for u in (0.5, 2.0, 10.0):
        h = 1e-5
        d = (g_function(u + h) - g_function(u - h)) / (2 * h)
        assert abs(d - bessel_i_scaled(0, u)) < 1e-6
    assert abs(g_function(200.0) / (math.sqrt(400 / math.pi) * (1 - 1 / 1600)) - 1) < 1e-4


def test_gamma_and_euler():
    assert gamma_fn(1.0) == 1.0
    assert abs(gamma_fn(0.5) - math.sqrt(math.pi)) < 1e-12
    assert abs(euler_gamma() - 0.57721566490153286) < 1e-15
    val, _ = integrate.quad(lambda u: math.log(u) * math.exp(-u), 0, math.inf, epsabs=1e-12)
    assert abs(val + EULER_GAMMA) < 1e-8
    with pytest.raises(DomainError):
        gamma_fn(-1.0)


def test_purity():
    assert bessel_zero(7.3, 4) == bessel_zero(7.3, 4)
    assert dedekind_eta(0.37) == dedekind_eta(0.37)
