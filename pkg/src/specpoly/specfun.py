r"""Special functions used throughout the package.

Bessel functions :math:`J_\nu` and scaled :math:`e^{-x} I_\nu(x)` are thin,
domain-checked wrappers around :mod:`scipy.special` (AMOS / Cephes).  Bessel
zeros, the Dedekind eta function on the imaginary axis and the function

.. math::  g(u) = e^{-u} u \,(I_0(u) + I_1(u)),  \qquad g'(u) = e^{-u} I_0(u)

are implemented here.  All functions are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.optimize import brentq

from .exceptions import DomainError

__all__ = [
    "SpecialValue",
    "bessel_j",
    "bessel_i_scaled",
    "bessel_zero",
    "bessel_zeros_below",
    "exp_e1",
    "exp_e1_scaled",
    "dedekind_eta",
    "log_dedekind_eta",
    "dedekind_eta_bounded",
    "g_function",
    "gamma_fn",
    "euler_gamma",
]

EULER_GAMMA = 0.57721566490153286061

# Consecutive zeros of J_nu (nu >= 0) are more than 2.9 apart; a scan step
# well below that cannot step over a pair of zeros.
_ZERO_SCAN_STEP = 0.5


@dataclass(frozen=True)
class SpecialValue:
    """A function value together with an absolute error bound."""

    value: float
    absolute_error_bound: float

    def __post_init__(self):
        if not (math.isfinite(self.absolute_error_bound) and self.absolute_error_bound >= 0):
            raise ValueError("error bound must be finite and nonnegative")

    def __float__(self):
        return float(self.value)


def _check_nonneg(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be nonnegative, got {value!r}")
    return arr


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for order, x >= 0.

    Accepts scalars or broadcastable arrays.
    """
    nu = _check_nonneg("order", order)
    xx = _check_nonneg("x", x)
    return _scalar_or_array(special.jv(nu, xx))


def bessel_i_scaled(order, x):
    """Exponentially scaled modified Bessel function ``exp(-x) * I_order(x)``.

    The unscaled function overflows long before the arguments used for heat
    kernels at small times, so it is never exposed.
    """
    nu = _check_nonneg("order", order)
    xx = _check_nonneg("x", x)
    return _scalar_or_array(special.ive(nu, xx))


def _jv_derivative(nu, x):
    return 0.5 * (special.jv(nu - 1.0, x) - special.jv(nu + 1.0, x))


def _refine_zero(nu, lo, hi):
    f = lambda s: special.jv(nu, s)  # noqa: E731
    root = brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    # one guarded Newton polish step
    d = _jv_derivative(nu, root)
    if d != 0.0:
        cand = root - special.jv(nu, root) / d
        if lo <= cand <= hi and abs(special.jv(nu, cand)) <= abs(special.jv(nu, root)):
            root = cand
    return root


def _bracket_zeros(nu, a, b):
    """Sign-change brackets of J_nu on [a, b] using a fixed scan step."""
    n = max(2, int(math.ceil((b - a) / _ZERO_SCAN_STEP)) + 1)
    x = np.linspace(a, b, n)
    f = special.jv(nu, x)
    exact = np.nonzero(f == 0.0)[0]
    s = np.sign(f)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return x, f, idx, exact


def bessel_zeros_below(order, xmax):
    """All positive zeros of ``J_order`` that are ``<= xmax``, ascending.

    Zeros are bracketed by a sign-change scan starting at ``x = order``
    (no zero of ``J_nu`` lies below ``nu`` for ``nu > 0``) and refined with
    Brent's method.
    """
    nu = float(_check_nonneg("order", order))
    xmax = float(xmax)
    start = nu if nu > 0 else 1e-3
    if xmax <= start:
        return np.empty(0)
    x, f, idx, exact = _bracket_zeros(nu, start, xmax)
    zeros = [_refine_zero(nu, x[i], x[i + 1]) for i in idx]
    zeros.extend(float(x[i]) for i in exact if x[i] > 0)
    zeros = np.array(sorted(set(zeros)))
    return zeros[zeros <= xmax]


def _mcmahon(nu, n):
    beta = (n + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    return beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)


def bessel_zero(order, n):
    """The ``n``-th positive zero ``j_{order, n}`` of ``J_order``.

    The McMahon expansion provides the scan window, which is widened until
    ``n`` sign changes are found; the zero is then refined by Brent's method.
    """
    nu = float(_check_nonneg("order", order))
    if int(n) != n or n < 1:
        raise DomainError(f"zero index must be a positive integer, got {n!r}")
    n = int(n)
    # j_{nu,n} < nu + n*pi + 2*nu**(1/3) + pi covers small and large orders alike
    upper = max(_mcmahon(nu, n), nu + 2.0 * max(nu, 1.0) ** (1 / 3)) + math.pi
    while True:
        zeros = bessel_zeros_below(nu, upper)
        if len(zeros) >= n:
            return float(zeros[n - 1])
        upper += (n - len(zeros) + 1) * math.pi


def exp_e1(x):
    r"""Exponential integral :math:`E_1(x) = \int_x^\infty e^{-s}/s\,ds` for x > 0."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"E1 requires x > 0, got {x!r}")
    return _scalar_or_array(special.exp1(arr))


def _e1_scaled_asymptotic(x):
    # e^x E1(x) ~ (1/x) sum_k (-1)^k k!/x^k, stopped at the smallest term;
    # for x >= 50 the error is below e^{-x}
    term, total, k = 1.0, 1.0, 0
    while True:
        k += 1
        nxt = -term * k / x
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            break
        term = nxt
        total += term
    return total / x


def exp_e1_scaled(x):
    """``exp(x) * E1(x)`` for x > 0, finite where ``E1`` alone underflows."""
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"E1 requires x > 0, got {x!r}")
    if x < 50.0:
        return math.exp(x) * float(special.exp1(x))
    return _e1_scaled_asymptotic(x)


def _eta_terms(y):
    q = math.exp(-2.0 * math.pi * y)
    nterms = max(1, int(math.ceil(40.0 / (2.0 * math.pi * y))))
    while True:
        qn1 = q ** (nterms + 1)
        tail = qn1 / ((1.0 - q) * (1.0 - qn1))
        if tail <= 1e-16:
            break
        nterms += max(1, nterms // 2)
    logs = [math.log1p(-(q ** k)) for k in range(1, nterms + 1)]
    return math.fsum(logs), tail


def dedekind_eta_bounded(y):
    r"""Dedekind eta at ``tau = i*y`` with an error bound for the truncated product.

    :math:`\eta(iy) = e^{-\pi y/12} \prod_{n\ge1} (1 - e^{-2\pi n y})`.  The
    discarded factors satisfy :math:`|\log \prod_{n>N}| \le q^{N+1}/((1-q)(1-q^{N+1}))`.
    """
    if not (math.isfinite(y) and y > 0):
        raise DomainError(f"eta(iy) requires y > 0, got {y!r}")
    s, tail = _eta_terms(y)
    value = math.exp(-math.pi * y / 12.0 + s)
    # |exp(-tail) - 1| <= tail; add rounding of the compensated sum
    return SpecialValue(value, value * (tail + 4 * np.finfo(float).eps))


def log_dedekind_eta(y):
    """``log eta(i*y)``, evaluated from the q-product without exponentiating."""
    if not (math.isfinite(y) and y > 0):
        raise DomainError(f"eta(iy) requires y > 0, got {y!r}")
    s, _ = _eta_terms(y)
    return -math.pi * y / 12.0 + s


def dedekind_eta(y):
    """Dedekind eta on the imaginary axis, ``eta(i*y)`` (a positive real)."""
    return dedekind_eta_bounded(y).value


def g_function(u):
    """``g(u) = exp(-u) * u * (I_0(u) + I_1(u))``, an antiderivative of ``exp(-u) I_0(u)``.

    Grows like ``sqrt(2u/pi)``; finite for all u >= 0 and ``g(0) = 0``.
    """
    uu = _check_nonneg("u", u)
    return _scalar_or_array(uu * (special.ive(0, uu) + special.ive(1, uu)))


def gamma_fn(x):
    """Gamma function for x > 0."""
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


def euler_gamma():
    """The Euler-Mascheroni constant."""
    return EULER_GAMMA
