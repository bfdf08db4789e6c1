"""Dirichlet spectra of circular sectors and rectangles below a cutoff.

Sector eigenvalues are ``(j_{k pi/alpha, n} / R)**2`` for ``k, n >= 1``;
rectangle (``L x 1/L``) eigenvalues are ``pi**2 (m**2/L**2 + n**2 L**2)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .specfun import bessel_zeros_below

__all__ = [
    "SectorGeometry",
    "RectangleGeometry",
    "SpectrumTable",
    "sector_spectrum",
    "rectangle_spectrum",
    "weyl_check",
    "weyl_count",
]


@dataclass(frozen=True)
class SectorGeometry:
    """Circular sector with opening ``angle`` in (0, pi) and ``radius``."""

    angle: float
    radius: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.angle < math.pi):
            raise DomainError(f"sector angle must lie in (0, pi), got {self.angle!r}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius!r}")

    @property
    def area(self):
        return 0.5 * self.angle * self.radius**2

    @property
    def perimeter(self):
        return 2.0 * self.radius + self.angle * self.radius

    @property
    def corners(self):
        """Interior angles: the vertex and the two arc/edge corners."""
        return [self.angle, math.pi / 2, math.pi / 2]

    @property
    def arc_curvature(self):
        return 1.0 / self.radius

    @property
    def curvature_integral(self):
        """Boundary integral of the geodesic curvature (only the arc counts)."""
        return self.angle

    def scaled(self, factor):
        """The same sector with its radius multiplied by ``factor``."""
        return SectorGeometry(self.angle, self.radius * factor)

    def describe(self):
        return {"kind": "sector", "angle": self.angle, "radius": self.radius}


@dataclass(frozen=True)
class RectangleGeometry:
    """Rectangle of length ``L`` and width ``1/L``, optionally dilated by ``scale``."""

    L: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError(f"L must be positive, got {self.L!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be positive, got {self.scale!r}")

    @property
    def width(self):
        return self.scale / self.L

    @property
    def area(self):
        return self.scale**2

    @property
    def perimeter(self):
        return 2.0 * self.scale * (self.L + 1.0 / self.L)

    def scaled(self, factor):
        return RectangleGeometry(self.L, self.scale * factor)

    @property
    def corners(self):
        return [math.pi / 2] * 4

    @property
    def curvature_integral(self):
        return 0.0

    def describe(self):
        return {"kind": "rectangle", "L": self.L, "scale": self.scale}


@dataclass(frozen=True)
class SpectrumTable:
    """Ascending Dirichlet eigenvalues up to ``cutoff`` with their labels.

    ``labels[i]`` is ``(k, n)`` for sectors (angular index, zero index) and
    ``(m, n)`` for rectangles.  Multiplicities are kept as separate rows.
    """

    domain: SectorGeometry | RectangleGeometry
    cutoff: float
    eigenvalues: np.ndarray
    labels: np.ndarray = field(repr=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        lab = np.asarray(self.labels, dtype=np.int64).reshape(-1, 2)
        ev.setflags(write=False)
        lab.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "labels", lab)

    def __len__(self):
        return len(self.eigenvalues)

    def scaled(self, factor):
        """Table for the spectrum multiplied by ``factor``.

        Multiplying eigenvalues by ``factor`` is the same as dilating the
        domain by ``1/sqrt(factor)``; cutoff and geometry follow.
        """
        return SpectrumTable(
            self.domain.scaled(1.0 / math.sqrt(factor)),
            self.cutoff * factor,
            self.eigenvalues * factor,
            self.labels,
        )

    def to_csv(self, fh=None):
        """Write ``lambda,k_or_m,n`` rows; returns the text if ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["lambda", "k_or_m", "n"])
        for lam, (a, b) in zip(self.eigenvalues, self.labels):
            w.writerow([repr(float(lam)), int(a), int(b)])
        if fh is None:
            return out.getvalue()

    def to_dict(self):
        return {
            "domain": self.domain.describe(),
            "cutoff": self.cutoff,
            "count": len(self),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "labels": self.labels.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _sector_order_zeros(args):
    k, alpha, xmax = args
    return k, bessel_zeros_below(k * math.pi / alpha, xmax)


def sector_spectrum(geom, cutoff, mapper=map):
    """Dirichlet eigenvalues of a circular sector up to ``cutoff``.

    The outer loop runs over the angular index ``k`` (order ``k pi/alpha``),
    the inner over Bessel zeros below ``sqrt(cutoff) * R``.  No zero of
    ``J_nu`` lies below ``nu``, so ``k <= sqrt(cutoff) R alpha / pi`` is
    complete.  ``mapper`` may be a parallel ``map``; the result does not
    depend on it.
    """
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    xmax = math.sqrt(cutoff) * geom.radius
    kmax = int(math.floor(xmax * geom.angle / math.pi))
    jobs = [(k, geom.angle, xmax) for k in range(1, kmax + 1)]
    lam, labels = [], []
    for k, zeros in sorted(mapper(_sector_order_zeros, jobs), key=lambda item: item[0]):
        for n, z in enumerate(zeros, start=1):
            lam.append((z / geom.radius) ** 2)
            labels.append((k, n))
    lam = np.array(lam, dtype=float)
    labels = np.array(labels, dtype=np.int64).reshape(-1, 2)
    keep = lam <= cutoff
    lam, labels = lam[keep], labels[keep]
    order = np.argsort(lam, kind="stable")
    if len(lam) == 0:
        warnings.warn("cutoff below first eigenvalue: empty spectrum table", RuntimeWarning, stacklevel=2)
    return SpectrumTable(geom, float(cutoff), lam[order], labels[order])


def rectangle_spectrum(L, cutoff):
    """Dirichlet eigenvalues of the ``L x 1/L`` rectangle up to ``cutoff``.

    ``L`` may also be a :class:`RectangleGeometry` (to include a dilation).
    """
    geom = L if isinstance(L, RectangleGeometry) else RectangleGeometry(float(L))
    L = geom.L
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    a, b = L * geom.scale, geom.width
    mmax = int(math.floor(a * math.sqrt(cutoff) / math.pi)) + 1
    nmax = int(math.floor(b * math.sqrt(cutoff) / math.pi)) + 1
    m = np.arange(1, mmax + 1)
    n = np.arange(1, nmax + 1)
    mm, nn = np.meshgrid(m, n, indexing="ij")
    lam = math.pi**2 * (mm**2 / a**2 + nn**2 / b**2)
    keep = lam <= cutoff
    lam = lam[keep]
    labels = np.stack([mm[keep], nn[keep]], axis=1)
    order = np.argsort(lam, kind="stable")
    if len(lam) == 0:
        warnings.warn("cutoff below first eigenvalue: empty spectrum table", RuntimeWarning, stacklevel=2)
    return SpectrumTable(geom, float(cutoff), lam[order], labels[order])


def weyl_count(geom, lam):
    """Two-term Weyl prediction ``A lam/4pi - P sqrt(lam)/4pi``."""
    return geom.area * lam / (4 * math.pi) - geom.perimeter * math.sqrt(lam) / (4 * math.pi)


def weyl_check(table):
    """Relative deviation of the eigenvalue count from the two-term Weyl law."""
    n = len(table)
    if n == 0:
        raise DomainError("weyl_check needs a nonempty table")
    return abs(n - weyl_count(table.domain, table.cutoff)) / n
