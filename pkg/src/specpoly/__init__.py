"""Zeta-regularised determinants of Dirichlet Laplacians on sectors and rectangles.

Modules
-------
specfun       Bessel functions and zeros, E1, Dedekind eta.
heat_kernels  Dirichlet heat kernels on the half-line, quadrant and wedges.
spectra       Eigenvalue tables for sectors and rectangles.
regdet        Heat traces, small-time fits and zeta'(0).
polyakov      Corner finite parts and the angular derivative of log det.
rect_eta      Rectangle determinants through the Dedekind eta function.
"""

__version__ = "0.1.0"

from .exceptions import CutoffTooSmallError, DomainError, NumericalQualityError, SpecpolyError  # noqa: E402

__all__ = ["__version__", "SpecpolyError", "DomainError", "CutoffTooSmallError", "NumericalQualityError"]
