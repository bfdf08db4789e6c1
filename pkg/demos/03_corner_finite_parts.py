"""
Finite parts of corner integrals
================================

Integrate the diagonal wedge heat kernel against a weight near the corner
and extract the constant term of the small-time expansion.
"""

import math

from specpoly.polyakov import corner_fp_closed_pi2, corner_fp_numeric, corner_heat_coefficient

# a constant weight reproduces the corner heat coefficient
for theta in (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3):
    c = corner_fp_numeric(theta, 1.0, 0.0)
    print(f"theta = {theta:.4f}  fp = {c.fp:.8f}  expected {corner_heat_coefficient(theta):.8f}")

# a log r weight adds a log t term; fp removes gamma_e times its coefficient
w = 4 / math.pi
num = corner_fp_numeric(math.pi / 2, w, w)
ref = corner_fp_closed_pi2(w, w)
print(f"right angle, weight (4/pi)(1 + log r):")
print(f"  constant term {num.hadamard_fp:.8f}   closed {ref.hadamard_fp:.8f}")
print(f"  log t term    {num.log_coefficient:.8f}   closed {ref.log_coefficient:.8f}")
print(f"  fp            {num.fp:.8f}   closed {ref.fp:.8f}")
