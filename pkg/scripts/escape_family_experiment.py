#!/usr/bin/env python3
"""Escape family experiment: graphs p = a cos(m q) on the flat cylinder.

Curvature grows like m^2 while the Hausdorff distance to the base circle
stays pinned at 1, so the family leaves every bounded class without ever
approaching the base curve in the Hausdorff metric.  Emits a two-panel SVG
and a CSV with (member, curvature, tameness, distance, action class).
"""

import argparse


from lagbound.classify import FamilySpec, classify, generate_family
from lagbound.pipelines import run_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/escape")
    ap.add_argument("--max-level", type=int, default=12,
                    help="largest class level to try per member")
    args = ap.parse_args()

    svg, csv = run_figure("escape_cos", args.out)
    print(f"figure  {svg}")
    print(f"report  {csv}")

    curves = generate_family(FamilySpec("escape_cos", {"modes": [1, 2, 3]}))
    print("\nsmallest admitting level per member:")
    for curve in curves:
        level = None
        for k in range(1, args.max_level + 1):
            if classify(curve, k).verdict is True:
                level = k
                break
        print(f"  {curve.name:12s} -> k = {level}")


if __name__ == "__main__":
    main()
