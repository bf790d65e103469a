"""Kernel transfer curves reconstructed from serialized denoiser records.

A record is the plain mapping ``{"family", "c", "weights"}`` that the
benchmark suite stores next to its results. The kernel shapes are part of
that interface: hinge points are fixed ratios of sqrt(c) per family.
"""

import math

import numpy as np


def _pwl1(r, c):
    a1, a2 = 2.0 * math.sqrt(c), 4.0 * math.sqrt(c)
    f1 = np.zeros_like(r)
    m = (r >= -2 * a1) & (r < -a1)
    f1[m] = -r[m] / a1 - 2.0
    m = (r >= -a1) & (r < a1)
    f1[m] = r[m] / a1
    m = (r >= a1) & (r < 2 * a1)
    f1[m] = -r[m] / a1 + 2.0
    f2 = np.clip(np.where(np.abs(r) <= a1, 0.0,
                          (r - np.sign(r) * a1) / (a2 - a1)), -1.0, 1.0)
    f3 = np.sign(r) * np.maximum(np.abs(r) - a2, 0.0)
    return np.stack([f1, f2, f3], axis=1)


def _pwl2(r, c):
    b1 = 1.0 / (1.0 + 6.0 * math.sqrt(c))
    b2 = 1.0 / (1.0 + 2.0 * math.sqrt(c))
    f1 = np.clip(r / b1, -1.0, 1.0)
    f2 = np.clip(np.where(np.abs(r) <= b1, 0.0,
                          (r - np.sign(r) * b1) / (b2 - b1)), -1.0, 1.0)
    return np.stack([f1, f2], axis=1)


def _exp(r, c):
    t2 = 6.0 * c
    return np.stack([r, r * np.exp(-r * r / (2.0 * t2))], axis=1)


_BUILDERS = {"pwl1": _pwl1, "pwl2": _pwl2, "exp": _exp}


def denoiser_curve(record: dict, r: np.ndarray) -> np.ndarray:
    """Evaluate a serialized denoiser record on a grid."""
    try:
        build = _BUILDERS[record["family"]]
    except KeyError:
        raise ValueError(f"unknown kernel family {record.get('family')!r} in record") from None
    weights = np.asarray(record["weights"], dtype=float)
    F = build(np.asarray(r, dtype=float), float(record["c"]))
    if F.shape[1] != weights.size:
        raise ValueError(f"record has {weights.size} weights, family "
                         f"{record['family']} has {F.shape[1]} kernels")
    return F @ weights
