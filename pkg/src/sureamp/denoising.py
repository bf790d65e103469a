"""SURE evaluation and the linear weight solve for kernel denoisers.

For a denoiser ``f(r) = sum_j a_j f_j(r)`` applied to ``r = x + sqrt(c) z``,
Stein's identity gives an MSE estimate computable from ``r`` alone:

    sure = c + <g^2 + 2 c g'>,   g(r) = f(r) - r.

Minimizing it over the weights is a k x k linear solve: differentiating
the quadratic form yields the normal equations

    sum_j a_j <f_i f_j> = <r f_i> - c <f_i'>     for all i.

(The right-hand side is the Stein estimate of ``E[x f_i(r)]``, which is
what the projection of ``x`` onto the kernel span requires.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterError
from .kernels import KernelFamily, family_by_name, kernel_matrix

__all__ = [
    "DenoiserSpec",
    "sure_value",
    "optimize_weights",
    "apply_denoiser",
    "soft_threshold",
]

# eigenvalues of the scale-normalized Gram below this (relative) level are
# treated as numerically zero
_EIG_FLOOR = 100.0 * np.finfo(float).eps
# spec of the ill-conditioning fallback: tiny diagonal ridge + warning flag
_COND_LIMIT = 1e12
_RIDGE_SCALE = 1e-9
# significance shrinkage used inside the iterative solver: an eigendirection
# this collinear with the rest is kept only to the extent its coefficient
# exceeds its own sampling error (positive-part James-Stein factor)
_COLLINEAR_RATIO = 0.05
_SHRINK_KAPPA = 6.0


@dataclass
class DenoiserSpec:
    """A fitted kernel denoiser: family, noise level, linear weights."""

    family: KernelFamily
    c: float
    weights: np.ndarray
    regularized: bool = False
    sure: Optional[float] = None

    def to_record(self) -> dict:
        return {
            "family": self.family.name,
            "c": self.c,
            "weights": [float(w) for w in self.weights],
            "regularized": self.regularized,
        }

    @staticmethod
    def from_record(rec: dict) -> "DenoiserSpec":
        return DenoiserSpec(
            family=family_by_name(rec["family"]),
            c=float(rec["c"]),
            weights=np.asarray(rec["weights"], dtype=float),
            regularized=bool(rec.get("regularized", False)),
        )


def _spec_matrices(spec: DenoiserSpec, r: np.ndarray):
    F, D = kernel_matrix(spec.family, r, spec.c)
    if F.shape[1] != len(spec.weights):
        raise ParameterError(
            f"weight vector has {len(spec.weights)} entries, family "
            f"{spec.family.name} has {F.shape[1]} kernels"
        )
    return F, D


def sure_value(r: np.ndarray, c: float, spec: DenoiserSpec) -> float:
    """Unbiased MSE estimate ``c + <g^2 + 2 c g'>`` with ``g = f - r``."""
    if not c > 0.0:
        raise ParameterError(f"noise variance must be positive, got {c}")
    r = np.asarray(r, dtype=float)
    F, D = _spec_matrices(spec, r)
    g = F @ spec.weights - r
    gprime = D @ spec.weights - 1.0
    return float(c + np.mean(g * g) + 2.0 * c * np.mean(gprime))


def apply_denoiser(spec: DenoiserSpec, r: np.ndarray):
    """Elementwise denoising plus the mean derivative ``<f'>``."""
    r = np.asarray(r, dtype=float)
    F, D = _spec_matrices(spec, r)
    return F @ spec.weights, float(D.mean(axis=0) @ spec.weights)


def soft_threshold(r: np.ndarray, threshold: float):
    """``sign(r) (|r| - t)_+`` and the active fraction as mean derivative."""
    if not threshold > 0.0:
        raise ParameterError(f"threshold must be positive, got {threshold}")
    r = np.asarray(r, dtype=float)
    x_hat = np.sign(r) * np.maximum(np.abs(r) - threshold, 0.0)
    return x_hat, float(np.mean(np.abs(r) > threshold))


def optimize_weights(
    r: np.ndarray,
    c: float,
    family: KernelFamily,
    stabilize: bool = False,
) -> DenoiserSpec:
    """Solve the SURE normal equations for the kernel weights.

    The solve works on the scale-normalized (correlation-form) Gram via its
    eigendecomposition. Numerically singular directions are dropped and an
    ill-conditioned Gram additionally receives the tiny diagonal ridge; both
    set ``regularized`` on the result.

    With ``stabilize=True`` (used by the AMP policy, where the solve runs on
    modest sample sizes every iteration and feeds back through the Onsager
    term), near-collinear eigendirections whose coefficient is not resolved
    by the data are shrunk with a positive-part James-Stein factor. This
    leaves well-identified fits bit-for-bit unchanged but prevents the
    wild weight pairs that otherwise blow up the iteration at bulk noise
    levels.
    """
    if not c > 0.0:
        raise ParameterError(f"noise variance must be positive, got {c}")
    r = np.asarray(r, dtype=float)
    if r.size < family.k:
        raise ParameterError(f"need at least {family.k} samples, got {r.size}")
    n = r.size
    F, D = kernel_matrix(family, r, c)
    G = (F.T @ F) / n
    b = (F.T @ r) / n - c * D.mean(axis=0)

    scale = np.sqrt(np.diag(G))
    scale[scale == 0.0] = 1.0
    Gc = G / np.outer(scale, scale)
    bc = b / scale

    regularized = False
    cond = np.linalg.cond(Gc)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        Gc = Gc + (_RIDGE_SCALE * np.trace(Gc) / family.k) * np.eye(family.k)
        regularized = True

    mu, V = np.linalg.eigh(Gc)
    keep = mu > _EIG_FLOOR * mu[-1]
    if not keep.all():
        regularized = True
    inv = np.where(keep, 1.0 / np.maximum(mu, np.finfo(float).tiny), 0.0)
    coef = inv * (V.T @ bc)

    if stabilize:
        Fs = F / scale
        zeta = (r[:, None] * F - c * D) / scale
        fitted = Fs @ (V @ coef)
        for j in range(family.k):
            if not keep[j] or mu[j] >= _COLLINEAR_RATIO * mu[-1] or coef[j] == 0.0:
                continue
            eta = zeta @ V[:, j] - (Fs @ V[:, j]) * fitted
            se = np.std(eta) / math.sqrt(n) / mu[j]
            if se > 0.0:
                factor = max(0.0, 1.0 - _SHRINK_KAPPA * (se / coef[j]) ** 2)
                if factor < 1.0:
                    coef[j] *= factor
                    regularized = True

    weights = (V @ coef) / scale
    spec = DenoiserSpec(family=family, c=float(c), weights=weights, regularized=regularized)
    spec.sure = sure_value(r, c, spec)
    return spec
