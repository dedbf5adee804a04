#!/usr/bin/env python3
"""Sweep the flat pair x = (1, eps), y = (-1, eps) on the sup-norm sphere.

The chord norm is 2 while the shorter boundary arc has length 4 - 2*eps,
so the ratio is exactly 2 - eps and tends to the optimal constant 2 as
eps -> 0.  Prints a small table confirming this against the computed
intrinsic distances.
"""
import argparse
import math
import sys

from spherearc import LpNorm, distance_ratio, intrinsic_distance


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eps", type=float, nargs="+",
                        default=[0.5, 0.2, 0.1, 0.05, 0.01, 0.001])
    args = parser.parse_args()

    spec = LpNorm(math.inf)
    print(f"{'eps':>10}  {'distance':>12}  {'ratio':>12}  {'2 - eps':>12}")
    for eps in args.eps:
        if not 0.0 < eps < 1.0:
            print(f"skipping eps = {eps}: need 0 < eps < 1", file=sys.stderr)
            continue
        x, y = (1.0, eps), (-1.0, eps)
        d = intrinsic_distance(spec, x, y).value
        ratio = distance_ratio(spec, x, y)
        print(f"{eps:>10.4g}  {d:>12.8f}  {ratio:>12.8f}  {2.0 - eps:>12.8f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
