"""
Angular derivative of the sector determinant
============================================

Differentiate zeta'(0) = -log det of the unit sector in its opening angle by
finite differences of spectral determinants, and compare with the sum of
boundary and corner terms.
"""

import math

from specpoly.polyakov import fd_derivative_check, variation_report

for alpha in (math.pi / 3, math.pi / 2):
    rep = variation_report(alpha)
    chk = fd_derivative_check(alpha, h=0.04, stencil=5, cutoff=4e4, assembled=rep["value"])
    print(f"alpha = {alpha:.4f}")
    print(f"  arc curvature      {rep['smooth_boundary']:.6f}")
    print(f"  arc normal deriv.  {rep['normal_derivative']:.6f}")
    print(f"  two arc corners    {2 * rep['arc_corner']['fp']:.6f}")
    print(f"  vertex             {rep['vertex_corner']['fp']:.6f}")
    print(f"  assembled          {rep['value']:.6f}")
    print(f"  finite difference  {chk.fd_value:.6f} +- {chk.fd_error:.1e}")

factor3 = variation_report(math.pi / 2, "paper-factor-3")["value"]
print(f"vertex value repeated at all three corners, no normal term: {factor3:.6f}")
