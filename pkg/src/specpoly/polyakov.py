r"""Corner contributions to the angular derivative of ``log det``.

Opening a unit sector from angle ``alpha`` is a conformal change whose
logarithmic weight near the vertex is ``(2/alpha)(1 + log r)``.  The derivative
of ``zeta'(0) = -log det`` then collects

* a curvature term on the arc, ``1/(6 pi)``,
* a normal-derivative term on the arc, ``1/(4 pi)``,
* one finite part per corner of ``int w K_theta`` over a neighbourhood of the
  corner, where ``K_theta`` is the diagonal wedge kernel.

For a corner weight ``w0 + wlog log r`` the small-time expansion of

.. math:: I(t) = \int_0^R\!\int_0^\theta (w_0 + w_{\log}\log r)\,
                 K_\theta(t; r, \phi)\, r\,d\phi\,dr

is ``b/t + c/sqrt(t) + C + D log t + O(sqrt t)`` with
``D = (wlog/2)(pi^2 - theta^2)/(24 pi theta)``.  The quantity entering the
derivative is ``C - gamma_e D`` (the Mellin transform of ``log t`` at ``s = 0``
leaves a ``-gamma_e`` behind); it is the ``fp`` of a :class:`CornerContribution`.
The plain constant ``C`` is kept as ``hadamard_fp``.

Two assemblies are available.  ``"local"`` gives the arc corners their actual
weight ``2/alpha`` (``log r = 0`` there) and includes the normal-derivative
term; it agrees with finite differences of the spectral determinant.
``"paper-factor-3"`` repeats the vertex value at both arc corners and drops
the normal-derivative term, giving ``1/(6pi) - 3(1+gamma_e)/(4pi)`` at
``alpha = pi/2``.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .exceptions import DomainError, NumericalQualityError
from .heat_kernels import wedge_angular_sum
from .regdet import AsymptoticFit, corner_coefficient, fit_finite_part, zeta_prime_zero
from .specfun import EULER_GAMMA
from .spectra import RectangleGeometry, SectorGeometry, rectangle_spectrum, sector_spectrum

__all__ = [
    "CornerContribution",
    "FDCheck",
    "CONVENTIONS",
    "corner_heat_coefficient",
    "corner_fp_closed_pi2",
    "corner_integral",
    "corner_fp_numeric",
    "default_tgrid",
    "smooth_boundary_term",
    "normal_derivative_term",
    "variation_assemble",
    "variation_report",
    "fd_derivative_check",
    "rect_fd_check",
]

CONVENTIONS = ("local", "paper-factor-3")
CORNER_EXPONENTS = (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class CornerContribution:
    """Finite part of a weighted corner integral.

    ``fp`` is the constant that enters the variation (``C - gamma_e D``),
    ``hadamard_fp`` the bare ``t**0`` coefficient ``C`` and
    ``log_coefficient`` the ``log t`` coefficient ``D``.
    """

    angle: float
    w0: float
    wlog: float
    fp: float
    hadamard_fp: float
    log_coefficient: float
    method: str
    uncertainty: float = 0.0
    radius: float = 1.0
    diagnostics: AsymptoticFit | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.method == "closed_pi2" and abs(self.angle - math.pi / 2) > 1e-15:
            raise DomainError("closed form exists only for the right angle")

    def to_dict(self):
        d = asdict(self)
        d["diagnostics"] = self.diagnostics.to_dict() if self.diagnostics is not None else None
        d["version"] = __version__
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def corner_heat_coefficient(theta):
    """Constant heat-trace term ``(pi^2 - theta^2)/(24 pi theta)`` of a corner."""
    if not (0.0 < theta < 2 * math.pi):
        raise DomainError(f"corner angle out of range: {theta!r}")
    return corner_coefficient(theta)


def corner_fp_closed_pi2(w0, wlog):
    """Closed-form corner finite part at the right angle.

    ``fp = w0/16 + wlog (-gamma_e/16 - 1/8)``; the bare constant is
    ``w0/16 - wlog (gamma_e/32 + 1/8)`` and the ``log t`` coefficient ``wlog/32``.
    """
    c = 1.0 / 16.0
    return CornerContribution(
        angle=math.pi / 2,
        w0=float(w0),
        wlog=float(wlog),
        fp=w0 * c + wlog * (-EULER_GAMMA / 16.0 - 0.125),
        hadamard_fp=w0 * c - wlog * (EULER_GAMMA / 32.0 + 0.125),
        log_coefficient=wlog / 32.0,
        method="closed_pi2",
    )


def _panels(vmax, width=2.0):
    n = max(4, int(math.ceil(vmax / width)))
    edges = np.linspace(0.0, vmax, n + 1)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * _GL_NODES[None, :] + 0.5 * (a + b)
    weights = 0.5 * (b - a) * _GL_WEIGHTS[None, :]
    return nodes.ravel(), weights.ravel()


def corner_integral(theta, t, w0, wlog, R=1.0):
    r"""``I(t)`` for a corner of angle ``theta`` cut off at radius ``R``.

    With ``u = r^2/2t`` the angular integral is exact,
    ``I(t) = (1/2) int_0^{R^2/2t} (w0 + (wlog/2) log(2tu)) S_theta(u) du``,
    and the radial integral is done by Gauss-Legendre panels in ``v = sqrt(u)``
    (the integrand is smooth in ``v``).
    """
    if not (t > 0 and R > 0):
        raise DomainError("t and R must be positive")
    vmax = R / math.sqrt(2.0 * t)
    v, wq = _panels(vmax)
    u = v * v
    S, bound = wedge_angular_sum(theta, u)
    with np.errstate(divide="ignore"):
        logr = 0.5 * np.log(2.0 * t * u)
    weight = w0 + wlog * np.where(v > 0, logr, 0.0)
    # du = 2 v dv, times the 1/2 in front
    vals = weight * S * v
    total = math.fsum(vals * wq)
    err = math.fsum(np.abs(weight) * bound * v * wq)
    return total, err


def default_tgrid(R=1.0, n=24):
    """24 log-spaced times in ``[1e-4, 1e-2] * R**2``.

    The cut at radius ``R`` adds a series in ``sqrt(t)/R`` that is only
    asymptotic; above ``t ~ 1e-2 R^2`` it is no longer captured by the basis.
    """
    return np.geomspace(1e-4, 1e-2, n) * R * R


def _corner_job(args):
    theta, t, w0, wlog, R = args
    return corner_integral(theta, t, w0, wlog, R)[0]


def corner_fp_numeric(theta, w0, wlog, R=1.0, tgrid=None, mapper=map, log_tolerance=1e-3):
    """Corner finite part from the wedge-kernel series.

    ``I(t)`` is sampled on ``tgrid`` and fitted by powers
    ``t^{-1}, t^{-1/2}, 1, t^{1/2}, t, t^{3/2}`` plus ``log t``.  The fitted ``log t``
    coefficient must agree with ``(wlog/2)(pi^2 - theta^2)/(24 pi theta)``
    within ``log_tolerance``.

    Raises
    ------
    NumericalQualityError
        If the fit is ill-conditioned (condition number above 1e10) or the
        ``log t`` coefficient disagrees with the corner law.
    """
    if not (0.0 < theta < math.pi):
        raise DomainError(f"corner angle must lie in (0, pi), got {theta!r}")
    if not R > 0:
        raise DomainError("R must be positive")
    tgrid = default_tgrid(R) if tgrid is None else np.asarray(tgrid, dtype=float)
    if np.any(tgrid <= 0) or np.any(tgrid >= R * R / 10.0 * (1 + 1e-12)):
        raise DomainError("tgrid must lie in (0, R^2/10)")
    values = np.array(list(mapper(_corner_job, [(theta, float(t), w0, wlog, R) for t in tgrid])))
    fit = fit_finite_part(tgrid, values, exponents=CORNER_EXPONENTS, include_log=True, weights=tgrid)
    if fit.condition_number > 1e10:
        raise NumericalQualityError(
            f"corner fit condition number {fit.condition_number:.3g} exceeds 1e10; use a different tgrid"
        )
    expected_log = 0.5 * wlog * corner_coefficient(theta)
    if abs(fit.log_coefficient - expected_log) > log_tolerance:
        raise NumericalQualityError(
            f"fitted log t coefficient {fit.log_coefficient:.3g} differs from {expected_log:.3g}"
        )
    uncertainty = _fp_uncertainty(tgrid, values, fit)
    # systematic part: refit without the largest times
    keep = max(2 * (len(CORNER_EXPONENTS) + 1), (2 * len(tgrid)) // 3)
    if keep < len(tgrid):
        alt = fit_finite_part(tgrid[:keep], values[:keep], CORNER_EXPONENTS, True, weights=tgrid[:keep])
        uncertainty += 2.0 * abs((alt.fp - EULER_GAMMA * alt.log_coefficient) - (fit.fp - EULER_GAMMA * fit.log_coefficient))
    return CornerContribution(
        angle=float(theta),
        w0=float(w0),
        wlog=float(wlog),
        fp=fit.fp - EULER_GAMMA * fit.log_coefficient,
        hadamard_fp=fit.fp,
        log_coefficient=fit.log_coefficient,
        method="numeric_series",
        uncertainty=uncertainty,
        radius=float(R),
        diagnostics=fit,
    )


def _fp_uncertainty(t, v, fit):
    """Standard error of ``C - gamma_e D`` from the weighted residuals."""
    X = np.stack([t**p for p in fit.exponents] + [np.log(t)], axis=1) * t[:, None]
    resid = (fit.evaluate(t) - v) * t
    dof = max(len(t) - X.shape[1], 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.pinv(X.T @ X)
    i0 = fit.exponents.index(0.0)
    g = np.zeros(X.shape[1])
    g[i0], g[-1] = 1.0, -EULER_GAMMA
    return float(math.sqrt(max(g @ cov @ g, 0.0)))


def smooth_boundary_term(alpha):
    """Arc curvature term ``(1/12pi) int kappa f ds`` with ``f = 2/alpha`` on the arc: ``1/(6pi)``."""
    if not (0.0 < alpha < math.pi):
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    return (2.0 / alpha) * alpha / (12.0 * math.pi)


def normal_derivative_term(alpha):
    """Arc term ``-(1/8pi) int d_n f ds`` (inward normal ``-d_r``, ``d_r f = 2/alpha``): ``1/(4pi)``."""
    if not (0.0 < alpha < math.pi):
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    return (2.0 / alpha) * alpha / (8.0 * math.pi)


def _corner(theta, w0, wlog, numeric_only, mapper):
    if not numeric_only and abs(theta - math.pi / 2) < 1e-15:
        return corner_fp_closed_pi2(w0, wlog)
    return corner_fp_numeric(theta, w0, wlog, mapper=mapper)


def variation_report(alpha, convention="local", numeric_only=False, mapper=map):
    """All pieces of ``d/dalpha (-log det)`` for the unit sector, as a dict."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    if not (0.0 < alpha < math.pi):
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    w = 2.0 / alpha
    vertex = _corner(alpha, w, w, numeric_only, mapper)
    smooth = smooth_boundary_term(alpha)
    if convention == "local":
        arc = _corner(math.pi / 2, w, 0.0, numeric_only, mapper)
        normal = normal_derivative_term(alpha)
    else:
        arc = _corner(math.pi / 2, w, w, numeric_only, mapper)
        normal = 0.0
    total = smooth + normal + 2.0 * arc.fp + vertex.fp
    return {
        "alpha": alpha,
        "assembly_convention": convention,
        "numeric_only": bool(numeric_only),
        "smooth_boundary": smooth,
        "normal_derivative": normal,
        "arc_corner": arc.to_dict(),
        "vertex_corner": vertex.to_dict(),
        "value": total,
        "uncertainty": 2.0 * arc.uncertainty + vertex.uncertainty,
        "version": __version__,
    }


def variation_assemble(alpha, convention="local", numeric_only=False, mapper=map):
    """``d/dalpha (-log det)`` of the unit sector, i.e. ``d/dalpha zeta'(0)``."""
    return variation_report(alpha, convention, numeric_only, mapper)["value"]


_STENCILS = {
    3: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    5: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0),
}


@dataclass(frozen=True)
class FDCheck:
    alpha: float
    h: float
    stencil: int
    cutoff: float
    fd_value: float
    fd_error: float
    assembled_value: float
    discrepancy: float
    convention: str
    samples: list

    def to_dict(self):
        d = asdict(self)
        d["version"] = __version__
        return d


def _sector_zp(args):
    angle, cutoff = args
    res = zeta_prime_zero(sector_spectrum(SectorGeometry(angle), cutoff))
    return res.zeta_prime0, res.error_estimate


def fd_derivative_check(alpha, h=0.04, stencil=5, cutoff=1e5, convention="local", mapper=map, assembled=None):
    """Central difference of ``zeta'(0)`` of unit sectors against the assembly.

    ``mapper`` distributes the stencil angles (each is an independent
    spectrum and determinant).  ``assembled`` may pass a precomputed
    :func:`variation_assemble` value.  Warns when the per-point error
    estimates are not small against the difference quotient.
    """
    if stencil not in _STENCILS:
        raise DomainError("stencil must be 3 or 5")
    offsets, coeffs = _STENCILS[stencil]
    reach = h * np.max(np.abs(offsets))
    if not (h > 0 and alpha - reach > 0 and alpha + reach < math.pi):
        raise DomainError("stencil leaves (0, pi)")
    angles = [alpha + h * o for o in offsets]
    results = list(mapper(_sector_zp, [(a, cutoff) for a in angles]))
    vals = np.array([r[0] for r in results])
    errs = np.array([r[1] for r in results])
    fd = float(np.dot(coeffs, vals) / h)
    fd_err = float(np.dot(np.abs(coeffs), errs) / h)
    if fd_err > 1e-3 * max(abs(fd), 1.0):
        warnings.warn(f"stencil under-resolved: propagated error {fd_err:.2g} for h = {h}", RuntimeWarning, stacklevel=2)
    if assembled is None:
        assembled = variation_assemble(alpha, convention)
    return FDCheck(
        alpha=float(alpha),
        h=float(h),
        stencil=int(stencil),
        cutoff=float(cutoff),
        fd_value=fd,
        fd_error=fd_err,
        assembled_value=float(assembled),
        discrepancy=float(fd - assembled),
        convention=convention,
        samples=[[float(a), float(v), float(e)] for a, v, e in zip(angles, vals, errs)],
    )


def rect_fd_check(L=1.0, h=0.01, cutoff=1e6):
    """Central difference (5-point) in ``L`` of the spectral ``zeta'(0)`` of the ``L x 1/L`` rectangle.

    Returns ``(fd_value, fd_error)``.
    """
    offsets, coeffs = _STENCILS[5]
    if not (h > 0 and L - 2 * h > 0):
        raise DomainError("stencil leaves L > 0")
    vals, errs = [], []
    for o in offsets:
        res = zeta_prime_zero(rectangle_spectrum(RectangleGeometry(L + o * h), cutoff))
        vals.append(res.zeta_prime0)
        errs.append(res.error_estimate)
    return float(np.dot(coeffs, vals) / h), float(np.dot(np.abs(coeffs), errs) / h)
