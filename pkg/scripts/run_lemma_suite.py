#!/usr/bin/env python3
"""Run the full verification suite and write one CSV per check.

Equivalent to `lagbound lemmas`; the --quick flag trades suite size for speed
while keeping the CSV schema identical.
"""

import argparse
import sys

from lagbound.config import ExperimentConfig, load_config
from lagbound.pipelines import run_lemma_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None)
    ap.add_argument("--out", default="out/lemmas")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()

    config = load_config(args.config) if args.config else ExperimentConfig()
    config.seed = args.seed
    config.out_dir = args.out
    config.quick = args.quick

    suite = run_lemma_suite(config)
    for res in suite.results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name:28s} {len(res.rows):4d} rows  {res.csv_path}")
    return 1 if suite.any_failed else 0


if __name__ == "__main__":
    sys.exit(main())
