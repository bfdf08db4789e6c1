"""Acceptance gate: one test per criterion, one PASS/FAIL line each in the run summary.

Criteria 5 and 10c do not hold for this problem; they are computed as stated
and marked strict ``xfail`` so that an unexpected pass would break the run.
"""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pytest

from specpoly.heat_kernels import halfplane_diag, quadrant_diag, sector_diag_series
from specpoly.polyakov import corner_fp_numeric, fd_derivative_check, variation_assemble
from specpoly.rect_eta import eta_critical_identity, eta_modular_residual, f_value, maximize_rect
from specpoly.regdet import fit_heat_invariants, scale_logdet, zeta_prime_zero
from specpoly.specfun import EULER_GAMMA, bessel_i_scaled, exp_e1, g_function
from specpoly.spectra import SectorGeometry, rectangle_spectrum, sector_spectrum, weyl_check

G = EULER_GAMMA
ROOT = Path(__file__).resolve().parents[1]
_FITS = {}


def _corner(theta, w0, wlog):
    key = (theta, w0, wlog)
    if key not in _FITS:
        _FITS[key] = corner_fp_numeric(theta, w0, wlog)
    return _FITS[key]


def test_c01_corner_closed_form(acceptance):
    t0 = time.perf_counter()
    c = _corner(math.pi / 2, 4 / math.pi, 4 / math.pi)
    dt = time.perf_counter() - t0
    target = -(1 + G) / (4 * math.pi)
    ok = abs(c.fp - target) < 1e-4 and dt < 60
    acceptance("01", "corner closed form at pi/2", ok, f"fp={c.fp:.7f} target={target:.7f} |d|={abs(c.fp - target):.1e} t={dt:.1f}s")
    assert ok


def test_c02_constant_weight_corner_law(acceptance):
    t0 = time.perf_counter()
    devs = []
    for theta in (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3):
        c = _corner(theta, 1.0, 0.0)
        devs.append(abs(c.fp - (math.pi**2 - theta**2) / (24 * math.pi * theta)))
    dt = time.perf_counter() - t0
    ok = max(devs) < 1e-4 and dt < 300
    acceptance("02", "constant-weight corner law", ok, f"max|d|={max(devs):.1e} t={dt:.1f}s")
    assert ok


def test_c03_sector_zeta0(acceptance):
    t0 = time.perf_counter()
    fit = fit_heat_invariants(sector_spectrum(SectorGeometry(math.pi / 2), 4e4))
    dt = time.perf_counter() - t0
    ok = abs(fit.fp - 11 / 48) < 1e-3 and dt < 300
    acceptance("03", "sector zeta(0) = 11/48", ok, f"a2={fit.fp:.6f} |d|={abs(fit.fp - 11 / 48):.1e} t={dt:.1f}s")
    assert ok


def test_c04_rectangle_adjudication(acceptance):
    t0 = time.perf_counter()
    zp = zeta_prime_zero(rectangle_spectrum(1.0, 1e6)).zeta_prime0
    dt = time.perf_counter() - t0
    eta2 = math.exp(2 * math.log(math.gamma(0.25) / (2 * math.pi**0.75)))
    cands = {"paper": math.log(2) - math.log(eta2), "corrected": 0.5 * math.log(2 / eta2)}
    matches = [k for k, v in cands.items() if abs(zp - v) < 1e-3]
    results = (ROOT / "RESULTS.md").read_text()
    recorded = len(matches) == 1 and f"matching convention: {matches[0]}" in results
    ok = len(matches) == 1 and recorded and dt < 60
    acceptance("04", "rectangle determinant adjudication", ok, f"zeta'={zp:.7f} matches={matches} recorded={recorded} t={dt:.1f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="the stated total is not the derivative of the spectral determinant")
def test_c05_variational_formula_end_to_end(acceptance):
    t0 = time.perf_counter()
    with ProcessPoolExecutor(4) as pool:
        chk = fd_derivative_check(math.pi / 2, 0.04, 5, 1e5, convention="paper-factor-3", mapper=pool.map)
    dt = time.perf_counter() - t0
    target = 1 / (6 * math.pi) - 3 / (4 * math.pi) - 3 * G / (4 * math.pi)
    local = variation_assemble(math.pi / 2, "local")
    ok = abs(chk.fd_value - target) < 0.02 and dt < 300
    acceptance(
        "05",
        "variational formula end to end",
        ok,
        f"fd={chk.fd_value:.6f}±{chk.fd_error:.1e} target={target:.5f}; local assembly={local:.6f} t={dt:.1f}s",
    )
    assert ok


def test_c06_scaling_law(acceptance):
    table = rectangle_spectrum(1.0, 1e6)
    s = scale_logdet(zeta_prime_zero(table), 2.0)
    q = zeta_prime_zero(table.scaled(0.25))
    d = abs(s.zeta_prime0 - q.zeta_prime0)
    ok = d < 1e-3
    acceptance("06", "scaling law R=2", ok, f"|d|={d:.1e}")
    assert ok


def test_c07_square_maximisation(acceptance):
    t0 = time.perf_counter()
    L, _, _ = maximize_rect(1e-6)
    fs = [f_value(x) for x in (1.1, 1.5, 2.0, 3.0, 5.0)]
    dt = time.perf_counter() - t0
    ok = abs(L - 1) <= 1e-6 and all(b > a for a, b in zip(fs, fs[1:])) and f_value(3.0) > f_value(1.0) + 1 and dt < 10
    acceptance("07", "square maximises the determinant", ok, f"L*={L:.8f} f(3)-f(1)={f_value(3.0) - f_value(1.0):.3f} t={dt:.2f}s")
    assert ok


def test_c08_kernel_oracles(acceptance):
    grid = [(t, r, p) for t in (0.01, 0.1, 1.0) for r in (0.1, 0.5, 1.0, 2.0) for p in (math.pi / 8, math.pi / 4, 3 * math.pi / 8)]
    dq = max(abs(sector_diag_series(math.pi / 2, t, r, p).value - quadrant_diag(t, r, p)) for t, r, p in grid)
    dh = max(abs(sector_diag_series(math.pi, t, r, 2 * p).value - halfplane_diag(t, r, 2 * p)) for t, r, p in grid)
    ok = dq < 1e-10 and dh < 1e-10
    acceptance("08", "kernel series vs image kernels", ok, f"quadrant sup={dq:.1e} half-plane sup={dh:.1e}")
    assert ok


def test_c09_special_function_contracts(acceptance):
    e1 = all(x / (x + 1) < x * math.exp(x) * exp_e1(x) < (x + 1) / (x + 2) for x in (0.5, 1.0, 5.0, 25.0))
    modular = max(eta_modular_residual(y) for y in (0.5, 2.0, 3.0, 5.0))
    h = 1e-5
    gp = max(abs((g_function(u + h) - g_function(u - h)) / (2 * h) - bessel_i_scaled(0, u)) for u in (0.5, 2.0, 10.0))
    crit = eta_critical_identity()
    ok = e1 and modular < 1e-10 and gp < 1e-6 and crit < 1e-8
    acceptance("09", "special-function contracts", ok, f"E1 bound={e1} modular={modular:.1e} g'={gp:.1e} critical={crit:.1e}")
    assert ok


def test_c10a_weyl(acceptance):
    devs = {
        "sector pi/2 4e4": weyl_check(sector_spectrum(SectorGeometry(math.pi / 2), 4e4)),
        "sector pi/2 1e4": weyl_check(sector_spectrum(SectorGeometry(math.pi / 2), 1e4)),
        "rectangle 1e5": weyl_check(rectangle_spectrum(1.0, 1e5)),
    }
    ok = devs["sector pi/2 4e4"] < 0.02 and devs["sector pi/2 1e4"] < 0.03 and devs["rectangle 1e5"] < 0.01
    acceptance("10a", "Weyl deviations", ok, ", ".join(f"{k}={v:.1e}" for k, v in devs.items()))
    assert ok


def test_c10b_dirichlet_zeros(acceptance):
    worst = 0.0
    for theta in (math.pi / 6, 1.0, math.pi / 2, 2.5, math.pi):
        for t in (1e-3, 0.1, 1.0):
            for r in (0.1, 1.0, 3.0):
                worst = max(worst, abs(sector_diag_series(theta, t, r, 0.0).value))
                v = sector_diag_series(theta, t, r, theta)
                worst = max(worst, abs(v.value) - v.truncation_bound)
    worst = max(worst, quadrant_diag(0.1, 1.0, 0.0), quadrant_diag(0.1, 1.0, math.pi / 2), halfplane_diag(0.1, 1.0, 0.0))
    ok = worst <= 1e-12
    acceptance("10b", "Dirichlet boundary zeros", ok, f"worst={worst:.1e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="a log r weight produces a genuine log t term at every corner")
def test_c10c_log_coefficient_vanishing(acceptance):
    keys = [(math.pi / 2, 4 / math.pi, 4 / math.pi)] + [
        (th, 1.0, 0.0) for th in (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3)
    ]
    coefs = {k: _corner(*k).log_coefficient for k in keys}
    worst_key = max(coefs, key=lambda k: abs(coefs[k]))
    ok = all(abs(c) < 1e-3 for c in coefs.values())
    acceptance(
        "10c",
        "log t coefficient vanishing in corner fits",
        ok,
        f"worst={coefs[worst_key]:.4f} at (theta={worst_key[0]:.4f}, wlog={worst_key[2]:.4f}); constant-weight max="
        f"{max(abs(c) for k, c in coefs.items() if k[2] == 0):.1e}",
    )
    assert ok


def test_c10d_thread_determinism(acceptance):
    g = SectorGeometry(1.3)
    seq = zeta_prime_zero(sector_spectrum(g, 2e4)).to_json()
    with ProcessPoolExecutor(4) as pool:
        par = zeta_prime_zero(sector_spectrum(g, 2e4, mapper=pool.map)).to_json()
        cseq = corner_fp_numeric(1.0, 1.0, 0.5).to_json()
        cpar = corner_fp_numeric(1.0, 1.0, 0.5, mapper=pool.map).to_json()
    ok = seq == par and cseq == cpar
    acceptance("10d", "deterministic across worker counts", ok, f"det identical={seq == par} corner identical={cseq == cpar}")
    assert ok
