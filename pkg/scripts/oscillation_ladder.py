#!/usr/bin/env python3
"""Oscillation ladders: graphs of -d/dq [s^p bump(q) sin(q/s)] on the unit
cylinder for a dyadic ladder of scales s.

The sup norm of the graph tends to zero while the curvature sup blows up like
s^(p-3); the log-log fit of the measured curvature against s recovers the
rate (-3/2 for p = 3/2, -1/2 for the p = 2.5 variant).
"""

import argparse

import numpy as np

from lagbound.pipelines import run_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/oscillation")
    args = ap.parse_args()

    for family in ("hs_family", "hs_variant_alpha"):
        svg, csv = run_figure(family, args.out)
        rows = [line.split(",") for line in open(csv).read().splitlines()[2:]]
        s_vals = np.array([float(r[1]) for r in rows])
        sups = np.array([float(r[2]) for r in rows])
        slope = np.polyfit(np.log(s_vals), np.log(sups), 1)[0]
        print(f"{family:18s} curvature slope {slope:+.3f}   ({svg})")


if __name__ == "__main__":
    main()
