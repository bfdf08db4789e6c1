r"""Heat traces, small-time fits and zeta-regularised determinants.

For a Dirichlet spectrum (no zero modes) with heat expansion
``Tr(t) ~ a0/t + a1/sqrt(t) + a2 + O(sqrt(t))`` the regularised value is

.. math::

    \zeta'(0) = \sum_\lambda E_1(\lambda t_0) - \frac{a_0}{t_0}
        - \frac{2 a_1}{\sqrt{t_0}} + a_2(\gamma_e + \log t_0)
        + \int_0^{t_0} \frac{R(t)}{t}\,dt,

where ``R = Tr - a0/t - a1/sqrt(t) - a2`` and ``t0 = t_min``.  The last
integral is taken in closed form from a fit of ``R`` on ``[t0, 10 t0]`` by
``c1 sqrt(t) + c2 t + c3 t^{3/2}``.  The split at ``t_split`` of the Mellin
integral cancels in this form; the ``"quadrature"`` method keeps it and
integrates over ``log t`` instead, as an independent cross-check.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, special

from . import __version__
from .exceptions import CutoffTooSmallError, DomainError, NumericalQualityError
from .specfun import EULER_GAMMA
from .spectra import RectangleGeometry, SectorGeometry

__all__ = [
    "HeatTraceSamples",
    "AsymptoticFit",
    "DetScheme",
    "DetResult",
    "heat_trace",
    "sample_heat_trace",
    "heat_invariants",
    "corner_coefficient",
    "fit_finite_part",
    "fit_heat_invariants",
    "zeta_prime_zero",
    "scale_logdet",
]

_EPS = np.finfo(float).eps
HEAT_EXPONENTS = (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5)


@dataclass(frozen=True)
class HeatTraceSamples:
    t: np.ndarray
    trace: np.ndarray
    tail_bound: np.ndarray
    cutoff: float
    tail_correction: bool


@dataclass(frozen=True)
class AsymptoticFit:
    """Least-squares fit of ``sum_p c_p t^p (+ c_log log t)``."""

    exponents: tuple
    coefficients: np.ndarray
    log_coefficient: float | None
    residual_norm: float
    condition_number: float

    def coefficient(self, p):
        for q, c in zip(self.exponents, self.coefficients):
            if q == p:
                return float(c)
        raise KeyError(f"exponent {p} not in the fit basis")

    @property
    def fp(self):
        """Coefficient of ``t**0``: the Hadamard finite part."""
        return self.coefficient(0.0)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        out = sum(c * t**p for p, c in zip(self.exponents, self.coefficients))
        if self.log_coefficient is not None:
            out = out + self.log_coefficient * np.log(t)
        return out

    def to_dict(self):
        return {
            "exponents": list(self.exponents),
            "coefficients": [float(c) for c in self.coefficients],
            "log_coefficient": self.log_coefficient,
            "residual_norm": self.residual_norm,
            "condition_number": self.condition_number,
        }


@dataclass(frozen=True)
class DetScheme:
    """Parameters of the regularisation scheme.

    ``t_min=None`` means ``25 / cutoff``, the smallest admissible value.
    """

    t_min: float | None = None
    t_split: float = 1.0
    window: float = 10.0
    n_fit: int = 30
    method: str = "e1"


@dataclass(frozen=True)
class DetResult:
    zeta0: float
    zeta_prime0: float
    error_estimate: float
    cutoff: float
    n_eigenvalues: int
    tail_correction: bool
    domain: dict
    scheme: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)

    @property
    def logdet(self):
        return -self.zeta_prime0

    @property
    def det(self):
        return math.exp(-self.zeta_prime0)

    def to_dict(self):
        d = asdict(self)
        d["logdet"] = self.logdet
        d["det"] = self.det
        d["version"] = __version__
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _weyl_density_terms(geom):
    return geom.area / (4 * math.pi), geom.perimeter / (8 * math.pi)


def _tail_terms(table, t):
    """Weyl-density tail estimate and a bound on the error of the estimate."""
    lam_c = table.cutoff
    A, B = _weyl_density_terms(table.domain)
    x = lam_c * t
    est = A * np.exp(-x) / t - B * np.sqrt(math.pi / t) * special.erfc(np.sqrt(x))
    weyl = table.domain.area * lam_c / (4 * math.pi) - table.domain.perimeter * math.sqrt(lam_c) / (4 * math.pi)
    # counting remainder, assumed to grow at most like sqrt(lambda) beyond the cutoff
    D = 2.0 * max(abs(len(table) - weyl), 1.0)
    remainder = D * np.exp(-x) * (2.0 + 1.0 / (2.0 * x))
    return est, remainder


def heat_trace(table, t, tail_correction=False):
    """``sum exp(-lambda t)`` over the table, optionally with a Weyl tail.

    Returns ``(trace, tail_bound)``; ``tail_bound`` bounds the contribution of
    the eigenvalues above the cutoff that is not accounted for.  Scalar ``t``
    gives floats, array ``t`` gives arrays.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(tt)) or np.any(tt <= 0):
        raise DomainError("heat_trace requires t > 0")
    lam = table.eigenvalues
    flat = np.atleast_1d(tt)
    trace = np.array([np.exp(-lam * s).sum() for s in flat])
    est, rem = _tail_terms(table, flat)
    if tail_correction:
        trace = trace + est
        bound = rem
    else:
        bound = np.abs(est) + rem
    # summation rounding
    bound = bound + 8 * _EPS * np.abs(trace)
    if tt.ndim == 0:
        return float(trace[0]), float(bound[0])
    return trace, bound


def sample_heat_trace(table, t_grid, tail_correction=False):
    t_grid = np.asarray(t_grid, dtype=float)
    trace, bound = heat_trace(table, t_grid, tail_correction)
    return HeatTraceSamples(t_grid, np.atleast_1d(trace), np.atleast_1d(bound), table.cutoff, tail_correction)


def corner_coefficient(theta):
    """Heat-trace constant contributed by a Dirichlet corner of interior angle theta."""
    return (math.pi**2 - theta**2) / (24 * math.pi * theta)


def heat_invariants(geom):
    """``(a0, a1, a2)`` of the Dirichlet heat trace of a sector or rectangle.

    ``a2`` is assembled from corner and curvature terms.  For sectors it is
    checked against the closed form
    ``alpha/12pi + (pi^2 - alpha^2)/(24 pi alpha) + 1/8``.
    """
    if isinstance(geom, (int, float)):
        geom = RectangleGeometry(float(geom))
    a0 = geom.area / (4 * math.pi)
    a1 = -geom.perimeter / (8 * math.sqrt(math.pi))
    a2 = math.fsum(corner_coefficient(c) for c in geom.corners) + geom.curvature_integral / (12 * math.pi)
    if isinstance(geom, SectorGeometry):
        al = geom.angle
        closed = al / (12 * math.pi) + (math.pi**2 - al**2) / (24 * math.pi * al) + 0.125
        assert abs(closed - a2) <= 1e-14, (closed, a2)
    return a0, a1, a2


def fit_finite_part(samples, values=None, exponents=HEAT_EXPONENTS, include_log=False, weights="relative"):
    """Fit small-time data by powers of ``t`` (and optionally ``log t``).

    Parameters
    ----------
    samples : HeatTraceSamples or array_like
        Either samples, or the ``t`` values (then pass ``values``).
    exponents : sequence of float
        Strictly increasing, no duplicates.
    include_log : bool
        Add a ``t**0 log t`` basis function.
    weights : "relative", None or array
        ``"relative"`` divides each row by ``|v|`` so that every sample counts
        with its relative accuracy.

    Returns
    -------
    AsymptoticFit
    """
    if isinstance(samples, HeatTraceSamples):
        t, v = samples.t, samples.trace
    else:
        t = np.asarray(samples, dtype=float)
        v = np.asarray(values, dtype=float)
    exps = tuple(float(p) for p in exponents)
    if any(b <= a for a, b in zip(exps, exps[1:])):
        raise DomainError("exponents must be strictly increasing")
    nbasis = len(exps) + int(include_log)
    if len(t) < 2 * nbasis:
        raise DomainError(f"need at least {2 * nbasis} samples for {nbasis} basis functions, got {len(t)}")
    if np.any(t <= 0):
        raise DomainError("sample times must be positive")
    cols = [t**p for p in exps]
    if include_log:
        cols.append(np.log(t))
    X = np.stack(cols, axis=1)
    if isinstance(weights, str) and weights == "relative":
        w = 1.0 / np.maximum(np.abs(v), np.max(np.abs(v)) * 1e-300 + 1e-300)
    elif weights is None:
        w = np.ones_like(v)
    else:
        w = np.asarray(weights, dtype=float)
    Xw = X * w[:, None]
    scale = np.linalg.norm(Xw, axis=0)
    if np.any(scale == 0):
        raise NumericalQualityError("design matrix has a zero column")
    Xs = Xw / scale
    sv = np.linalg.svd(Xs, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if not math.isfinite(cond) or cond > 1e13:
        raise NumericalQualityError(f"rank-deficient design matrix (condition number {cond:.3g})")
    sol, *_ = np.linalg.lstsq(Xs, v * w, rcond=None)
    coef = sol / scale
    resid = float(np.linalg.norm((X @ coef - v) * w))
    logc = float(coef[-1]) if include_log else None
    pcoef = coef[: len(exps)]
    return AsymptoticFit(exps, pcoef, logc, resid, cond)


def fit_heat_invariants(table, t_grid=None, include_log=True, tail_correction=False):
    """Fit the heat trace of ``table`` at small times.

    The default grid has 40 log-spaced times in ``[25/cutoff, 0.01]``; wider
    windows let the unmodelled ``t**2`` terms leak into the constant.
    """
    if t_grid is None:
        lo = 25.0 / table.cutoff
        t_grid = np.geomspace(lo, max(0.01, 16 * lo), 40)
    samples = sample_heat_trace(table, t_grid, tail_correction)
    return fit_finite_part(samples, exponents=HEAT_EXPONENTS, include_log=include_log)


def _extension(table, invariants, t_min, window, n_fit, tail_correction, basis=(0.5, 1.0, 1.5)):
    """Fit R(t) on [t_min, window t_min] and integrate R/t over (0, t_min)."""
    a0, a1, a2 = invariants
    ts = np.geomspace(t_min, window * t_min, n_fit)
    trace, _ = heat_trace(table, ts, tail_correction)
    R = trace - a0 / ts - a1 / np.sqrt(ts) - a2
    X = np.stack([ts**p for p in basis], axis=1)
    scale = np.linalg.norm(X, axis=0)
    sol, *_ = np.linalg.lstsq(X / scale, R, rcond=None)
    c = sol / scale
    integral = math.fsum(ci * t_min**p / p for ci, p in zip(c, basis))
    resid = float(np.max(np.abs(X @ c - R))) if len(R) else 0.0
    return integral, c, resid


def _tail_integral(table, t_min):
    """Integral over t >= t_min of the Weyl tail estimate divided by t."""
    A, B = _weyl_density_terms(table.domain)
    lam_c = table.cutoff

    def f(s):
        lam = lam_c + s / t_min
        return (A - B / math.sqrt(lam)) * special.exp1(lam * t_min) / t_min

    val, _ = integrate.quad(f, 0.0, math.inf, epsabs=1e-16, epsrel=1e-10, limit=200)
    return val


def _tail_error(table, t_min, tail_correction):
    """Integral over t >= t_min of the tail bound divided by t."""
    lam_c = table.cutoff
    weyl = table.domain.area * lam_c / (4 * math.pi) - table.domain.perimeter * math.sqrt(lam_c) / (4 * math.pi)
    D = 2.0 * max(abs(len(table) - weyl), 1.0)
    x = lam_c * t_min
    # int e^{-L t}(2 + 1/(2 L t))/t dt
    err = D * (2.0 * special.exp1(x) + 0.5 * (math.exp(-x) / x - special.exp1(x)))
    if not tail_correction:
        err += abs(_tail_integral(table, t_min))
    return float(err)


def _quadrature_route(table, invariants, t_min, t_split, tail_correction):
    """F(0) pieces by adaptive quadrature in log t (independent of the E1 sums)."""
    a0, a1, a2 = invariants
    lam = table.eigenvalues

    def reg(u):
        t = math.exp(u)
        tr, _ = heat_trace(table, t, tail_correction)
        return tr - a0 / t - a1 / math.sqrt(t) - a2

    mid, mid_err = integrate.quad(reg, math.log(t_min), math.log(t_split), epsabs=1e-12, epsrel=1e-12, limit=400)
    # integrate Tr/t for t > t_split until the integrand drops below 1e-18
    t_end = t_split + (math.log(max(len(lam), 1)) + 41.5) / lam[0]

    def big(u):
        t = math.exp(u)
        return float(np.exp(-lam * t).sum())

    far, far_err = integrate.quad(big, math.log(t_split), math.log(t_end), epsabs=1e-14, epsrel=1e-12, limit=400)
    head = mid + far - a0 / t_split - 2 * a1 / math.sqrt(t_split) + a2 * (EULER_GAMMA + math.log(t_split))
    # mid above is int_{t_min}^{t_split} R/t; the pieces of R below t_min come from the fit
    return head, mid_err + far_err


def zeta_prime_zero(table, invariants=None, scheme=None, tail_correction=None):
    """Zeta-regularised ``zeta(0)``, ``zeta'(0)`` and ``log det`` from a spectrum.

    Parameters
    ----------
    table : SpectrumTable
    invariants : (a0, a1, a2), optional
        Defaults to :func:`heat_invariants` of the table's domain.
    scheme : DetScheme, optional
    tail_correction : bool, optional
        Weyl-density tail above the cutoff.  Defaults to on for sectors and
        off for rectangles.

    Raises
    ------
    CutoffTooSmallError
        If ``cutoff * t_min < 25``.
    DomainError
        If the table is empty.
    """
    scheme = scheme or DetScheme()
    if len(table) == 0:
        raise DomainError("cutoff below first eigenvalue: the spectrum table is empty")
    if invariants is None:
        invariants = heat_invariants(table.domain)
    if tail_correction is None:
        tail_correction = isinstance(table.domain, SectorGeometry)
    t_min = scheme.t_min if scheme.t_min is not None else 25.0 / table.cutoff
    if table.cutoff * t_min < 25.0 * (1 - 1e-12):
        raise CutoffTooSmallError(
            f"cutoff too small: cutoff * t_min = {table.cutoff * t_min:.3g} < 25; raise the cutoff or t_min"
        )
    if not t_min < scheme.t_split:
        raise DomainError("t_min must be below t_split")
    a0, a1, a2 = invariants
    lam = table.eigenvalues

    small, coeffs, fit_resid = _extension(table, invariants, t_min, scheme.window, scheme.n_fit, tail_correction)
    small2, _, _ = _extension(table, invariants, t_min, scheme.window, scheme.n_fit, tail_correction, (0.5, 1.0))
    small_half, _, _ = _extension(
        table, invariants, t_min, scheme.window / 2, scheme.n_fit, tail_correction
    )
    tail_int = _tail_integral(table, t_min) if tail_correction else 0.0

    if scheme.method == "e1":
        e1_sum = math.fsum(special.exp1(lam * t_min))
        pieces = [e1_sum, -a0 / t_min, -2 * a1 / math.sqrt(t_min), a2 * (EULER_GAMMA + math.log(t_min))]
        head = math.fsum(pieces)
        quad_err = 0.0
        scale = math.fsum(abs(p) for p in pieces)
    elif scheme.method == "quadrature":
        head, quad_err = _quadrature_route(table, invariants, t_min, scheme.t_split, tail_correction)
        tail_int = 0.0  # already inside the quadrature of the corrected trace
        scale = abs(head) + a0 / t_min
    else:
        raise DomainError(f"unknown method {scheme.method!r}")

    zp = head + tail_int + small
    ext_err = abs(small - small2) + abs(small - small_half)
    tail_err = _tail_error(table, t_min, tail_correction)
    round_err = 64 * _EPS * (scale + len(lam) * _EPS * scale)
    error = ext_err + tail_err + quad_err + round_err + abs(fit_resid) * 1e-3
    if not math.isfinite(zp):
        raise NumericalQualityError("non-finite zeta'(0)")
    return DetResult(
        zeta0=float(a2),
        zeta_prime0=float(zp),
        error_estimate=float(error),
        cutoff=float(table.cutoff),
        n_eigenvalues=len(table),
        tail_correction=bool(tail_correction),
        domain=table.domain.describe(),
        scheme={
            "t_min": t_min,
            "t_split": scheme.t_split,
            "window": scheme.window,
            "n_fit": scheme.n_fit,
            "method": scheme.method,
            "invariants": [float(a0), float(a1), float(a2)],
        },
        components={
            "small_time_extension": float(small),
            "extension_coefficients": [float(c) for c in coeffs],
            "tail_integral": float(tail_int),
            "extension_error": float(ext_err),
            "tail_error": float(tail_err),
        },
    )


def scale_logdet(result, R):
    """Determinant data after dilating the domain by ``R``.

    ``det -> R**(-2 zeta(0)) det``, i.e. ``zeta'(0) -> zeta'(0) + 2 zeta(0) log R``.
    """
    if not (R > 0 and math.isfinite(R)):
        raise DomainError(f"R must be positive, got {R!r}")
    dom = dict(result.domain)
    if "radius" in dom:
        dom["radius"] = dom["radius"] * R
    if "scale" in dom:
        dom["scale"] = dom["scale"] * R
    return DetResult(
        zeta0=result.zeta0,
        zeta_prime0=result.zeta_prime0 + 2.0 * result.zeta0 * math.log(R),
        error_estimate=result.error_estimate,
        cutoff=result.cutoff / R**2,
        n_eigenvalues=result.n_eigenvalues,
        tail_correction=result.tail_correction,
        domain=dom,
        scheme={**result.scheme, "scaled_by": R},
        components=result.components,
    )
