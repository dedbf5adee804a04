"""Command-line interface.

Subcommands: distance, ratio, verify, john, search, export.
Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or input
error.  Output is deterministic for fixed inputs and seed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import john as john_mod
from . import metric, verify
from .norms import Norm, SpecError, norm_from_json, normalize_norm, sphere_points, TWO_PI


SUITE_ALIASES = {
    "lemma-2.1": "euclidean-sphere",
    "lemma-3.1": "tangent-lines",
    "lemma-3.2": "angles",
    "lemma-3.3": "estimate-segment",
    "lemma-3.4": "norm-decreasing",
    "theorem-3.5": "k-bound",
    "theorem-3.6": "main-bound",
}
SUITES = ("euclidean-sphere", "tangent-lines", "angles", "estimate-segment",
          "norm-decreasing", "k-bound", "main-bound", "constant-2")


def _load_norm(text: str) -> Norm:
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    return norm_from_json(text)


def _emit(args, text: str) -> None:
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def cmd_distance(args) -> int:
    spec = _load_norm(args.norm)
    result = metric.intrinsic_distance(spec, args.x, args.y, tol=args.tol)
    _emit(args, json.dumps(result.to_dict()) + "\n")
    return 0


def cmd_ratio(args) -> int:
    spec = _load_norm(args.norm)
    ratio = metric.distance_ratio(spec, args.x, args.y, tol=args.tol)
    _emit(args, json.dumps({"ratio": ratio}) + "\n")
    return 0


def cmd_john(args) -> int:
    spec = _load_norm(args.norm)
    ellipse = john_mod.inner_john_ellipse(spec, facets=args.facets)
    cert = john_mod.verify_john(spec, ellipse, tol=args.tol)
    payload = {"ellipse": ellipse.to_dict(), "certificate": cert.to_dict()}
    _emit(args, json.dumps(payload) + "\n")
    return 0 if (cert.inner_ok and cert.outer_ok) else 1


def cmd_verify(args) -> int:
    names = []
    for raw in args.suite.split(","):
        name = SUITE_ALIASES.get(raw.strip(), raw.strip())
        if name == "all":
            names.extend(SUITES)
        elif name in SUITES:
            names.append(name)
        else:
            print(f"unknown suite {raw!r}; choose from {', '.join(SUITES)} or 'all'",
                  file=sys.stderr)
            return 2
    spec = _load_norm(args.norm)
    normalized, _ = normalize_norm(spec)

    reports = []
    for name in sorted(set(names)):
        if name == "euclidean-sphere":
            reports.append(verify.check_euclidean_sphere(trials=args.trials, seed=args.seed))
        elif name == "tangent-lines":
            reports.append(verify.check_lemma_tangent_lines(normalized, args.trials, args.seed))
        elif name == "angles":
            reports.append(verify.check_lemma_angles(normalized, args.trials, args.seed))
        elif name == "estimate-segment":
            reports.append(verify.check_estimate_segment(normalized, args.trials, args.seed))
        elif name == "norm-decreasing":
            reports.append(verify.check_norm_decreasing(normalized, args.trials, args.seed))
        elif name == "k-bound":
            reports.append(verify.check_theorem_k_bound(
                normalized, trials=min(args.trials, 200), seed=args.seed))
        elif name == "main-bound":
            reports.append(verify.check_main_theorem(
                spec, trials=min(args.trials, 200), seed=args.seed))
        elif name == "constant-2":
            reports.append(verify.check_schaffer_constant(
                spec, trials=min(args.trials, 200), seed=args.seed))
    reports.sort(key=lambda r: r.name)
    _emit(args, "".join(r.to_json() + "\n" for r in reports))
    return 0 if all(r.passed for r in reports) else 1


def cmd_search(args) -> int:
    result = verify.ratio_search(args.family, args.budget, seed=args.seed)
    _emit(args, json.dumps(result.to_dict()) + "\n")
    return 0


def cmd_export(args) -> int:
    spec = _load_norm(args.norm)
    if args.what == "sphere":
        thetas = np.linspace(0.0, TWO_PI, args.points, endpoint=False)
        pts = sphere_points(spec, thetas)
        if args.format == "json":
            rows = [{"theta": float(t), "x": float(p[0]), "y": float(p[1])}
                    for t, p in zip(thetas, pts)]
            _emit(args, json.dumps(rows) + "\n")
        else:
            lines = ["theta,x,y"]
            lines += [f"{_fmt(t)},{_fmt(p[0])},{_fmt(p[1])}" for t, p in zip(thetas, pts)]
            _emit(args, "\n".join(lines) + "\n")
        return 0
    # ratio-landscape: grid over both angles
    thetas = np.linspace(0.0, TWO_PI, args.points, endpoint=False)
    pts = sphere_points(spec, thetas)
    rows = []
    for i, ta in enumerate(thetas):
        for j, tb in enumerate(thetas):
            if abs(math.remainder(ta - tb, TWO_PI)) < 1e-12:
                ratio = 1.0  # limit value on the diagonal
            else:
                ratio = metric.distance_ratio(spec, pts[i], pts[j], tol=args.tol)
            rows.append((float(ta), float(tb), float(ratio)))
    if args.format == "json":
        payload = [{"theta_x": a, "theta_y": b, "ratio": r} for a, b, r in rows]
        _emit(args, json.dumps(payload) + "\n")
    else:
        lines = ["theta_x,theta_y,ratio"]
        lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(r)}" for a, b, r in rows]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _add_common(sub, norm=True):
    if norm:
        sub.add_argument("--norm", required=True,
                         help="norm spec as inline JSON, @file, or - for stdin")
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default="-", help="output path, - for stdout")
    sub.add_argument("--format", choices=("json", "csv"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherearc",
        description="Intrinsic metrics on unit spheres of planar norms")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("distance", help="intrinsic distance between two sphere points")
    _add_common(p)
    p.add_argument("--x", type=float, nargs=2, required=True, metavar=("X0", "X1"))
    p.add_argument("--y", type=float, nargs=2, required=True, metavar=("Y0", "Y1"))
    p.set_defaults(func=cmd_distance)

    p = subs.add_parser("ratio", help="intrinsic / induced distance ratio")
    _add_common(p)
    p.add_argument("--x", type=float, nargs=2, required=True, metavar=("X0", "X1"))
    p.add_argument("--y", type=float, nargs=2, required=True, metavar=("Y0", "Y1"))
    p.set_defaults(func=cmd_ratio)

    p = subs.add_parser("john", help="maximum-area inscribed ellipse + certificate")
    _add_common(p)
    p.add_argument("--facets", type=int, default=256)
    p.set_defaults(func=cmd_john, tol=1e-6)

    p = subs.add_parser("verify", help="run property-check suites")
    _add_common(p)
    p.add_argument("--suite", default="all",
                   help="comma-separated suite names, or 'all'")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("search", help="worst-case distance-ratio search")
    _add_common(p, norm=False)
    p.add_argument("--family", choices=verify.FAMILIES, default="mixed")
    p.add_argument("--budget", type=int, default=100)
    p.set_defaults(func=cmd_search)

    p = subs.add_parser("export", help="plot-ready CSV/JSON exports")
    _add_common(p)
    p.add_argument("--what", choices=("sphere", "ratio-landscape"), default="sphere")
    p.add_argument("--points", type=int, default=360)
    p.set_defaults(func=cmd_export, tol=1e-6)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "export" else "json"
    try:
        return args.func(args)
    except (SpecError, metric.OffSphereError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
