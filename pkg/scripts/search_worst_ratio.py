#!/usr/bin/env python3
"""Search for norms and point pairs maximizing intrinsic/induced distance.

Runs random restarts over a norm family with a golden-section polish on the
two sphere angles, and prints the best configuration found as JSON.  The
known supremum over all planar norms is 2, approached by flat pairs on the
cube sphere; the Euclidean family tops out at pi/2.
"""
import argparse
import json
import sys

from spherearc import ratio_search
from spherearc.verify import FAMILIES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--family", choices=FAMILIES, default="mixed")
    parser.add_argument("--budget", type=int, default=200,
                        help="number of random restarts")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--arc-tol", type=float, default=1e-6)
    args = parser.parse_args()

    result = ratio_search(args.family, args.budget, seed=args.seed,
                          arc_tol=args.arc_tol)
    print(json.dumps(result.to_dict(), indent=2))
    print(f"best ratio {result.best_ratio:.6f} over {result.trials} restarts",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
