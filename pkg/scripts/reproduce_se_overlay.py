#!/usr/bin/env python3
"""State evolution vs matrix Monte Carlo on noiseless BG signals.

Produces the paired per-iteration records used for the overlay figure.
"""

import argparse
import sys

from sureamp.harness import check_results, load_results, preset_config, run_experiment, write_results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/bg-se.csv")
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cfg = preset_config("bg-se").scaled(args.scale)
    records = run_experiment(cfg, workers=args.workers)
    path = write_results(records, cfg, args.out)
    print(f"bg-se: {len(records)} records -> {path}")
    failures = 0
    for name, ok, detail in check_results(load_results(path), cfg):
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
