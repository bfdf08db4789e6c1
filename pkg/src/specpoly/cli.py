"""Command-line interface: ``specpoly <subcommand> [options]``.

Exit codes: 0 success, 1 domain error, 2 numerical-quality failure,
64 usage error (unknown flags or subcommands).
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .exceptions import DomainError, NumericalQualityError
from .polyakov import (
    CONVENTIONS,
    corner_fp_closed_pi2,
    corner_fp_numeric,
    fd_derivative_check,
    variation_report,
)
from .rect_eta import rect_det_eta, maximize_rect
from .regdet import DetScheme, heat_invariants, zeta_prime_zero
from .spectra import RectangleGeometry, SectorGeometry, rectangle_spectrum, sector_spectrum

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _angle(args, name="angle"):
    value = getattr(args, name)
    return math.radians(value) if args.degrees else value


def _tgrid(spec):
    if spec is None:
        return None
    lo, hi, n = spec.split(",")
    return np.geomspace(float(lo), float(hi), int(n))


def _sector_det(args, mapper):
    geom = SectorGeometry(_angle(args), args.radius)
    table = sector_spectrum(geom, args.cutoff, mapper=mapper)
    scheme = DetScheme(t_min=args.t_min, method=args.method)
    res = zeta_prime_zero(table, heat_invariants(geom), scheme, tail_correction=not args.no_tail)
    return res.to_dict()


def _rect_det(args, mapper):
    geom = RectangleGeometry(args.L)
    table = rectangle_spectrum(geom, args.cutoff)
    res = zeta_prime_zero(table, scheme=DetScheme(t_min=args.t_min, method=args.method), tail_correction=args.tail)
    out = res.to_dict()
    eta = rect_det_eta(args.L, args.convention)
    out["eta_report"] = eta.to_dict()
    cands = {"paper": -math.log(eta.det_paper), "corrected": -math.log(eta.det_corrected)}
    out["closed_form_candidates"] = cands
    out["matches"] = [k for k, v in cands.items() if abs(v - res.zeta_prime0) < 1e-3]
    return out


def _corner(args, mapper):
    theta = _angle(args)
    if args.method == "closed":
        if abs(theta - math.pi / 2) > 1e-6:
            raise DomainError("the closed form exists only for angle pi/2")
        return corner_fp_closed_pi2(args.w0, args.wlog).to_dict()
    return corner_fp_numeric(theta, args.w0, args.wlog, R=args.R, tgrid=_tgrid(args.tgrid), mapper=mapper).to_dict()


def _assemble(args, mapper):
    return variation_report(_angle(args), args.convention, args.numeric_only, mapper)


def _check(args, mapper):
    alpha = _angle(args)
    rep = variation_report(alpha, args.convention, mapper=mapper)
    res = fd_derivative_check(alpha, args.h, args.stencil, args.cutoff, args.convention, mapper, rep["value"])
    out = res.to_dict()
    out["assembly"] = rep
    return out


def _rect_max(args, mapper):
    L_star, det_star, path = maximize_rect(args.tol, args.convention)
    return {
        "L_star": L_star,
        "det_star": det_star,
        "evaluations": len(path),
        "path": [[float(L), float(f)] for L, f in path],
        "convention": args.convention,
        "version": __version__,
    }


def _selftest(args, mapper):
    from .heat_kernels import quadrant_diag, sector_diag_series
    from .rect_eta import eta_critical_identity, eta_modular_residual

    checks = {}
    grid = [(t, r, p) for t in (1e-3, 1e-1) for r in (0.1, 1.0) for p in (0.3, 0.8, 1.2)]
    checks["kernel_quadrant"] = max(
        abs(sector_diag_series(math.pi / 2, t, r, p).value - quadrant_diag(t, r, p)) for t, r, p in grid
    ) < 1e-10
    checks["eta_modular"] = eta_modular_residual(3.0) < 1e-10
    checks["eta_critical"] = eta_critical_identity() < 1e-8
    c = corner_fp_closed_pi2(4 / math.pi, 4 / math.pi).fp
    checks["corner_closed"] = abs(c + (1 + 0.5772156649015329) / (4 * math.pi)) < 1e-12
    rect = zeta_prime_zero(rectangle_spectrum(1.0, 2e5)).zeta_prime0
    checks["rect_pipeline"] = abs(rect - rect_det_eta(1.0, "corrected").f_value) < 1e-3
    ok = all(checks.values())
    if not ok:
        raise NumericalQualityError(f"selftest failed: {sorted(k for k, v in checks.items() if not v)}")
    return {"checks": checks, "ok": ok, "version": __version__}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $SPECPOLY_THREADS or CPU count)")
    common.add_argument("--degrees", action="store_true", help="angles are given in degrees")

    p = _Parser(prog="specpoly", description="Zeta-regularised determinants on sectors and rectangles.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sector-det", parents=[common], help="log det of a circular sector from its spectrum")
    s.add_argument("--angle", type=float, required=True)
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--cutoff", type=float, default=4e4)
    s.add_argument("--t-min", type=float, default=None)
    s.add_argument("--method", choices=("e1", "quadrature"), default="e1")
    s.add_argument("--no-tail", action="store_true", help="disable the Weyl tail correction")
    s.set_defaults(func=_sector_det)

    s = sub.add_parser("rect-det", parents=[common], help="log det of the L x 1/L rectangle")
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--cutoff", type=float, default=1e6)
    s.add_argument("--t-min", type=float, default=None)
    s.add_argument("--method", choices=("e1", "quadrature"), default="e1")
    s.add_argument("--tail", action="store_true", help="enable the Weyl tail correction")
    s.add_argument("--convention", choices=("paper", "corrected", "adjudicated"), default="adjudicated")
    s.set_defaults(func=_rect_det)

    s = sub.add_parser("corner", parents=[common], help="finite part of a weighted corner integral")
    s.add_argument("--angle", type=float, required=True)
    s.add_argument("--w0", type=float, required=True)
    s.add_argument("--wlog", type=float, required=True)
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--method", choices=("closed", "numeric"), default="numeric")
    s.add_argument("--tgrid", default=None, help="lo,hi,n for a log-spaced time grid")
    s.set_defaults(func=_corner)

    s = sub.add_parser("polyakov-assemble", parents=[common], help="angular derivative of -log det from corner terms")
    s.add_argument("--angle", type=float, required=True)
    s.add_argument("--convention", choices=CONVENTIONS, default="local")
    s.add_argument("--numeric-only", action="store_true")
    s.set_defaults(func=_assemble)

    s = sub.add_parser("polyakov-check", parents=[common], help="finite-difference check of the assembly")
    s.add_argument("--angle", type=float, required=True)
    s.add_argument("--h", type=float, default=0.04)
    s.add_argument("--stencil", type=int, choices=(3, 5), default=5)
    s.add_argument("--cutoff", type=float, default=1e5)
    s.add_argument("--convention", choices=CONVENTIONS, default="local")
    s.set_defaults(func=_check)

    s = sub.add_parser("rect-max", parents=[common], help="aspect ratio maximising the rectangle determinant")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--convention", choices=("paper", "corrected", "adjudicated"), default="adjudicated")
    s.set_defaults(func=_rect_max)

    s = sub.add_parser("selftest", parents=[common], help="quick consistency checks")
    s.set_defaults(func=_selftest)
    return p


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (list, tuple, dict)):
        for i, item in enumerate(obj):
            yield from _flatten(item, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def _render(result, fmt, command):
    if fmt == "json":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        if command == "rect-max":
            w.writerow(["L", "f"])
            w.writerows(sorted(result["path"]))
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(result):
                w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        return out.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in _flatten(result))


def _workers(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SPECPOLY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "threads", "output", "format")}
    workers = _workers(args)
    try:
        with contextlib.ExitStack() as stack:
            mapper = map
            if workers > 1:
                mapper = stack.enter_context(ProcessPoolExecutor(max_workers=workers)).map
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                result = args.func(args, mapper)
    except DomainError as exc:
        print(f"specpoly {args.command}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalQualityError as exc:
        print(f"specpoly {args.command}: numerical-quality failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    result = dict(result)
    result["parameters"] = params
    result["version"] = __version__
    text = _render(result, args.format, args.command)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
