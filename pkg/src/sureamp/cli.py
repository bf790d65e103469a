"""Command-line entry point for the benchmark harness."""

from __future__ import annotations

import argparse
import sys

from ._version import __version__
from .harness import (
    PRESETS,
    ExperimentConfig,
    ExperimentKind,
    check_results,
    load_results,
    preset_config,
    run_experiment,
    write_results,
)

_KIND_BY_COMMAND = {
    "denoise-sweep": ExperimentKind.DENOISE_SWEEP,
    "recover": ExperimentKind.RECOVERY_SWEEP,
    "se-compare": ExperimentKind.SE_COMPARE,
    "runtime": ExperimentKind.RUNTIME_SWEEP,
}

_DEFAULT_PRESET = {
    "denoise-sweep": "bg-denoise",
    "recover": "bg-recover",
    "se-compare": "bg-se",
    "runtime": "runtime",
}


def _add_run_args(p):
    p.add_argument("--config", help="YAML experiment config (overrides the preset)")
    p.add_argument("--preset", help="named built-in experiment (see list-experiments)")
    p.add_argument("--seed", type=int, help="override the base seed")
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply n and divide the Monte Carlo count")
    p.add_argument("--out", default=None, help="output CSV path")
    p.add_argument("--check", action="store_true",
                   help="evaluate published-value tolerances; nonzero exit on violation")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sureamp",
        description="SURE-tuned AMP compressed-sensing benchmarks",
    )
    parser.add_argument("--version", action="version", version=f"sureamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, kind in _KIND_BY_COMMAND.items():
        p = sub.add_parser(cmd, help=f"run a {kind.value} experiment")
        _add_run_args(p)
    sub.add_parser("list-experiments", help="list built-in experiment presets")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_yaml(args.config)
    else:
        cfg = preset_config(args.preset or _DEFAULT_PRESET[args.command])
    expected = _KIND_BY_COMMAND[args.command]
    if cfg.kind != expected:
        raise SystemExit(f"config kind {cfg.kind.value} does not match subcommand {args.command}")
    if args.seed is not None:
        d = cfg.to_dict()
        d["base_seed"] = args.seed
        cfg = ExperimentConfig.from_dict(d)
    if args.scale != 1.0:
        cfg = cfg.scaled(args.scale)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-experiments":
        for name, (_, desc) in PRESETS.items():
            print(f"{name:18s} {desc}")
        return 0

    cfg = _resolve_config(args)
    records = run_experiment(cfg, workers=args.workers)
    out = args.out or f"{cfg.name or cfg.kind.value}.csv"
    path = write_results(records, cfg, out)
    print(f"wrote {len(records)} records to {path}")

    if args.check:
        rows = load_results(path)
        checks = check_results(rows, cfg)
        failed = 0
        for name, ok, detail in checks:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
            failed += 0 if ok else 1
        if not checks:
            print("no published-value checks apply to this configuration")
        return 1 if failed else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
