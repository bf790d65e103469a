"""Batch figure renderer for benchmark CSVs.

Reads the versioned result schema produced by the sureamp harness and
renders one static image per invocation. No display server required.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .shapes import denoiser_curve  # noqa: E402

EXPECTED_COLUMNS = [
    "experiment", "prior", "policy", "gamma", "c", "snr_y_db",
    "seed", "metric_name", "metric_value", "iterations", "wall_ms", "mode", "n",
]

KINDS = {
    "recovery": "reconstruction SNR versus sampling ratio, one series per policy",
    "se-compare": "per-iteration MSE: matrix Monte Carlo markers vs state-evolution lines",
    "denoise": "denoising MSE versus noise level, one series per denoiser",
    "runtime": "median wall time versus signal length, one series per policy",
    "denoiser-shape": "transfer curves of serialized denoiser records (JSON inputs)",
}


class SchemaError(ValueError):
    pass


def read_rows(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, nothing to plot")
        missing = [c for c in EXPECTED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}")
        rows = []
        for raw in reader:
            row = dict(raw)
            for key in ("gamma", "c", "snr_y_db", "metric_value", "wall_ms"):
                row[key] = float(row[key]) if row[key] != "" else None
            for key in ("seed", "iterations", "n"):
                row[key] = int(row[key]) if row[key] != "" else None
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows, nothing to plot")
    return rows


def _mean_by(rows, key_cols, value=lambda r: r["metric_value"]):
    groups = defaultdict(list)
    for r in rows:
        v = value(r)
        if v is not None and not math.isnan(v):
            groups[tuple(r[k] for k in key_cols)].append(v)
    return {k: float(np.mean(v)) for k, v in groups.items()}


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=(7.0, 4.6), dpi=150)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def render_recovery(rows, out):
    rows = [r for r in rows if r["metric_name"] == "snr_x_db"]
    if not rows:
        raise SchemaError("no snr_x_db rows; is this a recovery CSV?")
    means = _mean_by(rows, ("policy", "gamma"))
    fig, ax = _new_axes("sampling ratio m/n", "reconstruction SNR [dB]",
                        f"noisy recovery ({rows[0]['prior']})")
    for policy in sorted({r["policy"] for r in rows}):
        gammas = sorted({g for (p, g) in means if p == policy})
        ax.plot(gammas, [means[(policy, g)] for g in gammas], marker="o", label=policy)
    ax.legend()
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def render_se_compare(rows, out):
    rows = [r for r in rows if r["metric_name"] == "mse_at_iter"]
    if not rows:
        raise SchemaError("no mse_at_iter rows; is this an se-compare CSV?")
    fig, ax = _new_axes("iteration", "MSE", f"state evolution vs matrix runs ({rows[0]['prior']})")
    ax.set_yscale("log")
    gammas = sorted({r["gamma"] for r in rows})
    colors = plt.cm.viridis(np.linspace(0.1, 0.85, len(gammas)))
    for color, gamma in zip(colors, gammas):
        mx = defaultdict(list)
        for r in rows:
            if r["gamma"] == gamma and r["mode"] == "matrix":
                mx[r["iterations"]].append(r["metric_value"])
        its = sorted(mx)
        # geometric mean across seeds: the typical trajectory on a log axis
        agg = [float(np.exp(np.mean(np.log(np.maximum(mx[t], 1e-300))))) for t in its]
        ax.plot(its, agg, linestyle="none", marker="o", ms=4, color=color,
                label=f"matrix, m/n={gamma:g}")
        se = {r["iterations"]: r["metric_value"] for r in rows
              if r["gamma"] == gamma and r["mode"] == "SE"}
        its_se = sorted(se)
        ax.plot(its_se, [se[t] for t in its_se], color=color,
                label=f"SE, m/n={gamma:g}")
    ax.legend(fontsize=8)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def render_denoise(rows, out):
    rows = [r for r in rows if r["metric_name"] == "mse"]
    if not rows:
        raise SchemaError("no mse rows; is this a denoise-sweep CSV?")
    means = _mean_by(rows, ("policy", "c"))
    fig, ax = _new_axes("noise variance c", "denoising MSE",
                        f"scalar denoising ({rows[0]['prior']})")
    ax.set_xscale("log")
    ax.set_yscale("log")
    for policy in sorted({r["policy"] for r in rows}):
        cs = sorted({c for (p, c) in means if p == policy})
        ax.plot(cs, [means[(policy, c)] for c in cs], marker="s", label=policy)
    ax.legend()
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def render_runtime(rows, out):
    med = [r for r in rows if r["metric_name"] == "wall_ms_median"]
    if not med:
        raise SchemaError("no wall_ms_median rows; is this a runtime CSV?")
    fig, ax = _new_axes("signal length n", "median wall time [ms]", "solver runtime")
    ax.set_xscale("log")
    ax.set_yscale("log")
    for policy in sorted({r["policy"] for r in med}):
        pts = sorted((r["n"], r["metric_value"]) for r in med if r["policy"] == policy)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="^", label=policy)
    ax.legend()
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def render_denoiser_shape(spec_paths, out):
    records = []
    for path in spec_paths:
        with open(path) as fh:
            rec = json.load(fh)
        records.append((Path(path).stem, rec))
    if not records:
        raise SchemaError("no denoiser records given")
    fig, ax = _new_axes("noisy value r", "denoised value f(r)", "denoiser transfer curves")
    span = max(3.0, *(6.0 * math.sqrt(rec["c"]) for _, rec in records))
    r = np.linspace(-span, span, 1001)
    for name, rec in records:
        ax.plot(r, denoiser_curve(rec, r),
                label=f"{name} ({rec['family']}, c={rec['c']:.3g})")
    ax.plot(r, r, linestyle=":", color="gray", label="identity")
    ax.legend(fontsize=8)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def main(argv=None) -> int:
    kinds_help = "; ".join(f"{k}: {v}" for k, v in KINDS.items())
    ap = argparse.ArgumentParser(
        prog="sureamp-figures",
        description=f"Render benchmark figures from result CSVs. Kinds: {kinds_help}",
    )
    ap.add_argument("--csv", action="append", default=[],
                    help="input CSV (or denoiser-record JSON for kind denoiser-shape); repeatable")
    ap.add_argument("--kind", required=True, choices=sorted(KINDS))
    ap.add_argument("--out", required=True, help="output image path (png/pdf/svg)")
    args = ap.parse_args(argv)
    if not args.csv:
        ap.error("at least one --csv input is required")

    try:
        if args.kind == "denoiser-shape":
            render_denoiser_shape(args.csv, args.out)
        else:
            rows = [row for path in args.csv for row in read_rows(path)]
            {
                "recovery": render_recovery,
                "se-compare": render_se_compare,
                "denoise": render_denoise,
                "runtime": render_runtime,
            }[args.kind](rows, args.out)
    except (SchemaError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
