"""Command-line front end.

Exit codes: 0 success, 2 usage / invalid parameters, 3 generation or spectrum
cap exceeded (``FAVARD_MAX_GEN`` raises the generation cap), 4 quadrature
tolerance not reached.

CSV columns
  curve : n,fav,err,nodes
  needle: n,samples,hits,p_hat,ci95,seed
  marks : theta,N,K,M,lhs,rhs,holds,best_constant,marked_squares,side_sum,side_bound,side_bound_holds,max_marked_per_witness
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import spectral
from ._accel import set_threads
from .cantor import AngleParams
from .errors import CapacityError, ToleranceNotReached
from .estimator import (CSV_HEADER, FavardCurve, QuadratureSpec, favard_curve, fit_power_law,
                        fmt_float, needle_mc, projection_length)
from .marking import MultiplicityStack

NEEDLE_COLUMNS = ("n", "samples", "hits", "p_hat", "ci95", "seed")
MARKS_COLUMNS = ("theta", "N", "K", "M", "lhs", "rhs", "holds", "best_constant",
                 "marked_squares", "side_sum", "side_bound", "side_bound_holds",
                 "max_marked_per_witness")


class UsageError(ValueError):
    pass


def _csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt_float(row[c]) if isinstance(row[c], float) else
                    str(row[c]).lower() if isinstance(row[c], bool) else row[c]
                    for c in columns])
    return buf.getvalue()


def _emit(args, record, columns=None):
    if getattr(args, "format", "json") == "csv" and columns is not None:
        text = _csv_text(columns, [record])
    else:
        text = json.dumps(record) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cond, msg):
    if not cond:
        raise UsageError(msg)


def cmd_curve(args):
    _require(args.n_max >= 0, "--n-max must be nonnegative")
    q = QuadratureSpec(args.rule, args.nodes, args.refinement)
    curve = favard_curve(args.n_max, q, threads=args.threads)
    text = curve.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_needle(args):
    _require(args.samples >= 1, "--samples must be positive")
    _require(args.seed >= 0, "--seed must be nonnegative")
    r = needle_mc(args.n, args.samples, args.seed)
    record = {"n": r.n, "samples": r.samples, "hits": r.hits, "p_hat": r.p_hat,
              "ci95": r.ci95, "seed": r.seed}
    _emit(args, record, NEEDLE_COLUMNS)


def cmd_projection(args):
    _emit(args, {"length": projection_length(args.n, args.theta)})


def cmd_marks(args):
    _require(args.K >= 1, "--K must be a positive integer")
    M = args.K if args.M is None else args.M
    _require(M >= 1, "--M must be a positive integer")
    stack = MultiplicityStack(AngleParams(args.theta), args.N)
    rep = stack.submultiplicativity(args.K, M)
    fam = stack.maximal_marked(args.K)
    side_sum, side_bound, ok = stack.side_sum_bound(fam)
    record = {"theta": args.theta, "N": args.N, "K": args.K, "M": M,
              "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds,
              "best_constant": None if math.isnan(rep.best_constant) else rep.best_constant,
              "marked_squares": len(fam), "side_sum": side_sum, "side_bound": side_bound,
              "side_bound_holds": ok, "max_marked_per_witness": fam.max_per_witness}
    _emit(args, record, MARKS_COLUMNS)


def cmd_fit(args):
    curve = FavardCurve.from_csv(args.inp)
    fit = fit_power_law(curve, args.n_from, args.n_to)
    _emit(args, {"slope": fit.slope, "intercept": fit.intercept,
                 "residual_rms": fit.residual_rms,
                 "n_from": fit.n_range[0], "n_to": fit.n_range[1]})


def cmd_spectral(args):
    kind = args.kind
    if kind == "nuhat":
        _require(args.n is not None, "nuhat needs --n")
        value = float(spectral.nu_hat(args.t, args.n, args.y))
        _emit(args, {"t": args.t, "N": args.n, "y": args.y, "nu_hat": value})
    elif kind == "riesz":
        _require(args.m is not None and args.n is not None, "riesz needs --m and --n")
        _require(args.m <= args.n, "need m <= n")
        a = 0.0 if args.a is None else args.a
        b = math.pi * 4.0 ** -args.m if args.b is None else args.b
        record = {"m": args.m, "n": args.n, "a": a, "b": b,
                  "integral": spectral.riesz_interval_integral(args.m, args.n, (a, b), args.tol)}
        if args.u is not None:
            record["u"] = args.u
            record["value"] = float(spectral.riesz(args.m, args.n, args.u))
        _emit(args, record)
    elif kind == "p2mass":
        _require(args.m is not None and args.n is not None, "p2mass needs --m and --n")
        mass = spectral.p2_l2_mass(args.t, args.m, args.n, args.tol)
        _emit(args, {"t": args.t, "m": args.m, "n": args.n, "mass": mass,
                     "ratio": mass / 4.0 ** (args.m - args.n)})
    elif kind == "gauge":
        _require(args.m is not None, "gauge needs --m")
        rng = None if args.lo is None else (args.lo, args.hi if args.hi is not None else 1.0)
        gspec = spectral.GaugeSetSpec(args.m, args.delta, args.eta, args.ell, rng)
        s = spectral.gauge_sets(gspec, args.t, args.variant)
        _emit(args, {"variant": args.variant, "m": args.m, "t": args.t, "delta": gspec.delta,
                     "eta": gspec.eta, "ell": gspec.ell, "length": s.length,
                     "intervals": s.bounds.tolist()})


def build_parser():
    p = argparse.ArgumentParser(prog="favard", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--threads", type=int, default=1, help="worker threads (0 = auto)")
        sp.add_argument("--out", default=None, help="write output to this path")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("curve", help="Favard curve, CSV columns " + ",".join(CSV_HEADER))
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--nodes", type=int, default=512)
    sp.add_argument("--rule", choices=("gauss", "midpoint"), default="gauss")
    sp.add_argument("--refinement", choices=("doubling", "none"), default="doubling")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("needle", help="Buffon needle Monte Carlo, CSV columns "
                        + ",".join(NEEDLE_COLUMNS))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_needle)

    sp = sub.add_parser("projection", help="length of Proj R_theta K_n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--theta", type=float, required=True)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_projection)

    sp = sub.add_parser("spectral", help="Fourier-side quantities")
    sp.add_argument("kind", choices=("riesz", "nuhat", "p2mass", "gauge"))
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=float, default=0.5)
    sp.add_argument("--y", type=float, default=0.0)
    sp.add_argument("--u", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--eta", type=float, default=1.0)
    sp.add_argument("--ell", type=int, default=0)
    sp.add_argument("--lo", type=float)
    sp.add_argument("--hi", type=float)
    sp.add_argument("--variant", choices=spectral.GAUGE_VARIANTS, default="i_delta")
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("marks", help="sub-multiplicativity and maximal marked squares, "
                        "CSV columns " + ",".join(MARKS_COLUMNS))
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--M", type=int)
    common(sp)
    sp.set_defaults(func=cmd_marks)

    sp = sub.add_parser("fit", help="power-law fit of a curve CSV")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--from", dest="n_from", type=int, default=3)
    sp.add_argument("--to", dest="n_to", type=int)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_fit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_threads(args.threads)
    try:
        args.func(args)
    except CapacityError as exc:
        print(f"favard: {exc}", file=sys.stderr)
        return 3
    except ToleranceNotReached as exc:
        print(f"favard: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"favard: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
