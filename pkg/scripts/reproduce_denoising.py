#!/usr/bin/env python3
"""Reproduce the scalar denoising comparisons (BG, k-dense, Student's-t).

Writes one CSV per prior and evaluates the published-value tolerances.
"""

import argparse
import sys

from sureamp.harness import check_results, load_results, preset_config, run_experiment, write_results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()

    failures = 0
    for preset in ("bg-denoise", "kdense-denoise", "t-denoise"):
        cfg = preset_config(preset)
        if args.seed is not None:
            d = cfg.to_dict()
            d["base_seed"] = args.seed
            cfg = type(cfg).from_dict(d)
        cfg = cfg.scaled(args.scale)
        records = run_experiment(cfg)
        path = write_results(records, cfg, f"{args.out_dir}/{preset}.csv")
        print(f"{preset}: {len(records)} records -> {path}")
        for name, ok, detail in check_results(load_results(path), cfg):
            print(f"  [{'PASS' if ok else 'FAIL'}] {name}: {detail}")
            failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
