#!/usr/bin/env python3
"""Wall-time sweep versus signal length at gamma = 0.5."""

import argparse
import sys

from sureamp.harness import check_results, load_results, preset_config, run_experiment, write_results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/runtime.csv")
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()

    cfg = preset_config("runtime").scaled(args.scale)
    records = run_experiment(cfg)
    path = write_results(records, cfg, args.out)
    print(f"runtime: {len(records)} records -> {path}")
    for name, ok, detail in check_results(load_results(path), cfg):
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
