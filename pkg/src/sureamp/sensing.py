"""Gaussian measurement ensemble and the noisy forward model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DegenerateSignalError, ParameterError
from .priors import rng_from_seed

__all__ = ["SensingOperator", "Measurement", "gaussian_operator", "measure", "snr_x"]


@dataclass(frozen=True)
class SensingOperator:
    """Dense m x n measurement matrix with unit-norm columns."""

    matrix: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ConfigurationError("measurement matrix must be 2-d")
        norms = np.linalg.norm(self.matrix, axis=0)
        if not np.allclose(norms, 1.0, atol=1e-12):
            raise ConfigurationError("columns must have unit norm (within 1e-12)")

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def gamma(self) -> float:
        return self.m / self.n

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def apply_t(self, z: np.ndarray) -> np.ndarray:
        return self.matrix.T @ z


@dataclass(frozen=True)
class Measurement:
    """Observed vector with its noise level and provenance."""

    y: np.ndarray
    sigma_w2: float
    snr_y_db: Optional[float]  # None in noiseless mode
    x_true: Optional[np.ndarray] = None
    seed: Optional[int] = None


def gaussian_operator(m: int, n: int, seed: int) -> SensingOperator:
    """i.i.d. N(0, 1/m) entries, then each column rescaled to unit norm."""
    if m < 1 or n < 1:
        raise ConfigurationError(f"dimensions must be positive, got m={m}, n={n}")
    if m > n:
        raise ConfigurationError(
            f"m={m} > n={n}: not a compressed-sensing regime (need m <= n)"
        )
    rng = rng_from_seed(seed)
    a = rng.normal(0.0, 1.0 / math.sqrt(m), (m, n))
    a /= np.linalg.norm(a, axis=0)
    return SensingOperator(matrix=a, seed=seed)


def measure(
    op: SensingOperator,
    x: np.ndarray,
    snr_y_db: Optional[float],
    seed: int = 0,
    keep_x: bool = True,
) -> Measurement:
    """Apply the forward model with noise calibrated to the target SNR.

    ``sigma_w2 = ||Phi x||^2 / (m 10^(SNR/10))`` so that the *expected*
    noise power matches the target; ``snr_y_db=None`` means noiseless.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (op.n,):
        raise ConfigurationError(f"signal has shape {x.shape}, operator expects ({op.n},)")
    clean = op.apply(x)
    if snr_y_db is None:
        return Measurement(y=clean, sigma_w2=0.0, snr_y_db=None,
                           x_true=x if keep_x else None, seed=seed)
    power = float(np.sum(clean * clean))
    if power == 0.0:
        raise DegenerateSignalError("all-zero signal cannot meet a finite SNR target")
    sigma_w2 = power / (op.m * 10.0 ** (snr_y_db / 10.0))
    w = rng_from_seed(seed).normal(0.0, math.sqrt(sigma_w2), op.m)
    return Measurement(y=clean + w, sigma_w2=sigma_w2, snr_y_db=float(snr_y_db),
                       x_true=x if keep_x else None, seed=seed)


def snr_x(x_true: np.ndarray, x_hat: np.ndarray) -> float:
    """Signal-domain reconstruction SNR in dB; +inf for exact recovery."""
    x_true = np.asarray(x_true, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x_true.shape != x_hat.shape:
        raise ParameterError(f"shape mismatch: {x_true.shape} vs {x_hat.shape}")
    num = float(np.sum(x_true * x_true))
    if num == 0.0:
        raise ParameterError("reference signal is all-zero")
    den = float(np.sum((x_true - x_hat) ** 2))
    if den == 0.0:
        return math.inf
    return 10.0 * math.log10(num / den)
