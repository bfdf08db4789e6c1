r"""Dirichlet heat kernels on the half-line, the quadrant and infinite wedges.

The wedge of opening ``theta`` has the diagonal eigenfunction expansion

.. math::

    K_\theta(t; r, \phi) = \frac{1}{\theta t} \sum_{k \ge 1}
        e^{-x} I_{k\pi/\theta}(x) \, \sin^2(k\pi\phi/\theta), \qquad x = r^2/2t,

which is evaluated with scaled Bessel values only, so arguments ``x`` up to
about 1e7 are safe.  For ``theta = pi/2`` and ``theta = pi`` it reduces to the
method-of-images kernels implemented alongside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import DomainError

__all__ = [
    "DiagonalKernelValue",
    "halfline_kernel",
    "quadrant_kernel",
    "quadrant_diag",
    "halfplane_diag",
    "sector_diag_series",
    "wedge_angular_sum",
]

_LOG_TINY = math.log(1e-18)


@dataclass(frozen=True)
class DiagonalKernelValue:
    t: float
    r: float
    phi: float
    value: float
    truncation_bound: float
    terms: int


def _check_t(t):
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"heat time must be positive, got {t!r}")


def halfline_kernel(t, x1, x2):
    """Dirichlet heat kernel of ``[0, inf)``."""
    _check_t(t)
    if x1 < 0 or x2 < 0:
        raise DomainError("half-line points must be nonnegative")
    pref = 1.0 / math.sqrt(4.0 * math.pi * t)
    # e^{-a} - e^{-b} = e^{-a} * (-expm1(a - b)), exact near the boundary
    a = (x1 - x2) ** 2 / (4.0 * t)
    return pref * math.exp(-a) * -math.expm1(-x1 * x2 / t)


def quadrant_kernel(t, u, v):
    """Dirichlet heat kernel of the quadrant ``x, y >= 0`` in Cartesian form.

    Four-image closed form; ``u`` and ``v`` are ``(x, y)`` pairs.
    """
    _check_t(t)
    (x1, y1), (x2, y2) = u, v
    s = 4.0 * t
    return (
        math.exp(-((x1 - x2) ** 2 + (y1 - y2) ** 2) / s)
        + math.exp(-((x1 + x2) ** 2 + (y1 + y2) ** 2) / s)
        - math.exp(-((x1 - x2) ** 2 + (y1 + y2) ** 2) / s)
        - math.exp(-((x1 + x2) ** 2 + (y1 - y2) ** 2) / s)
    ) / (math.pi * s)


def quadrant_diag(t, r, phi):
    """Diagonal of the quadrant kernel in polar coordinates, ``0 <= phi <= pi/2``."""
    _check_t(t)
    if r < 0:
        raise DomainError("r must be nonnegative")
    if not (0.0 <= phi <= math.pi / 2):
        raise DomainError(f"phi must lie in [0, pi/2], got {phi!r}")
    q = r * r / t
    s2 = math.sin(phi) ** 2
    c2 = math.cos(phi) ** 2
    # 1 + e^{-q} - e^{-q s^2} - e^{-q c^2} factors since s^2 + c^2 = 1
    return math.expm1(-q * s2) * math.expm1(-q * c2) / (4.0 * math.pi * t)


def halfplane_diag(t, r, phi):
    """Diagonal of the Dirichlet kernel of the upper half-plane, polar form."""
    _check_t(t)
    return -math.expm1(-r * r * math.sin(phi) ** 2 / t) / (4.0 * math.pi * t)


def _order_budget(x, step):
    """Number of wedge orders nu_k = k*step needed at argument x."""
    # e^{-x} I_nu(x) ~ exp(-nu^2 / 2x) / sqrt(2 pi x) for nu << x, and decays
    # faster than (x/2)^nu / nu! otherwise
    nu = math.sqrt(2.0 * max(x, 1e-300) * -_LOG_TINY) + 10.0
    return max(4, int(math.ceil(nu / step)) + 2)


def _tail_bound(nu_next, step, x):
    """Bound on sum_{j>=0} e^{-x} I_{nu_next + j*step}(x)."""
    a = special.ive(nu_next, x)
    if a == 0.0:
        return 0.0
    b = special.ive(nu_next + step, x)
    # successive ratios decrease with the order
    rho = b / a
    if rho >= 1.0:
        return math.inf
    return a / (1.0 - rho)


def sector_diag_series(theta, t, r, phi, K="auto"):
    """Diagonal Dirichlet heat kernel of the infinite wedge of opening ``theta``.

    Parameters
    ----------
    theta : float
        Opening angle in ``(0, pi]``.
    t, r, phi : float
        Heat time and polar position, ``0 <= phi <= theta``.
    K : int or "auto"
        Number of series terms.  ``"auto"`` grows K until the tail bound is
        below ``1e-12 * value`` or below ``1e-16``.

    Returns
    -------
    DiagonalKernelValue
    """
    _check_t(t)
    if not (0.0 < theta <= math.pi):
        raise DomainError(f"theta must lie in (0, pi], got {theta!r}")
    if r < 0 or not (0.0 <= phi <= theta):
        raise DomainError("point outside the wedge")
    step = math.pi / theta
    x = r * r / (2.0 * t)
    pref = 1.0 / (theta * t)
    if K == "auto":
        nterms = _order_budget(x, step)
        while True:
            k = np.arange(1, nterms + 1)
            nu = k * step
            terms = special.ive(nu, x) * np.sin(nu * phi) ** 2
            value = pref * math.fsum(terms)
            bound = pref * _tail_bound((nterms + 1) * step, step, x)
            if bound <= max(1e-12 * value, 1e-16):
                break
            nterms *= 2
    else:
        nterms = int(K)
        if nterms < 1:
            raise DomainError("K must be a positive integer")
        k = np.arange(1, nterms + 1)
        nu = k * step
        terms = special.ive(nu, x) * np.sin(nu * phi) ** 2
        value = pref * math.fsum(terms)
        bound = pref * _tail_bound((nterms + 1) * step, step, x)
    assert math.isfinite(value), "wedge series did not converge"
    return DiagonalKernelValue(t, r, phi, float(value), float(bound), nterms)


def wedge_angular_sum(theta, x):
    r"""Angular integral of the wedge kernel, up to the factor ``1/(2t)``.

    Since :math:`\int_0^\theta \sin^2(k\pi\phi/\theta)\,d\phi = \theta/2`,

    .. math:: \int_0^\theta K_\theta(t; r, \phi)\, d\phi = \frac{1}{2t} S_\theta(x),
              \qquad S_\theta(x) = \sum_{k\ge1} e^{-x} I_{k\pi/\theta}(x).

    Vectorised over ``x``; returns ``(S, tail_bound)`` arrays.
    """
    if not (0.0 < theta <= math.pi):
        raise DomainError(f"theta must lie in (0, pi], got {theta!r}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    step = math.pi / theta
    nterms = _order_budget(float(x.max(initial=0.0)), step)
    nu = np.arange(1, nterms + 1) * step
    vals = special.ive(nu[None, :], x[:, None])
    total = vals.sum(axis=1)
    a = special.ive((nterms + 1) * step, x)
    b = special.ive((nterms + 2) * step, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.where(a > 0, a / (1.0 - b / np.where(a > 0, a, 1.0)), 0.0)
    return total, bound
