#!/usr/bin/env python3
"""Reproduce the noisy-recovery sweeps (SNR_x versus sampling ratio)."""

import argparse
import sys

from sureamp.harness import check_results, load_results, preset_config, run_experiment, write_results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--presets", nargs="+",
                    default=["bg-recover", "kdense-recover", "t-recover"])
    args = ap.parse_args()

    failures = 0
    for preset in args.presets:
        cfg = preset_config(preset).scaled(args.scale)
        records = run_experiment(cfg, workers=args.workers)
        path = write_results(records, cfg, f"{args.out_dir}/{preset}.csv")
        print(f"{preset}: {len(records)} records -> {path}")
        for name, ok, detail in check_results(load_results(path), cfg):
            print(f"  [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
            failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
