"""Scalar-channel Monte Carlo prediction of the AMP trajectory.

Instead of running the matrix iteration, simulate the equivalent scalar
channel: draw ``x`` from the prior, observe ``r = x + sqrt(tau) z``, apply
the same per-iteration denoiser selection as the matrix algorithm, and
track the effective noise

    tau_{t+1} = sigma_w^2 + E[(x - f_t(r))^2] / gamma.

The derivative-based update ``sigma_w^2 + tau <f_t'> / gamma`` is recorded
alongside; the two coincide for posterior-mean denoisers (Stein identity)
and are close at SURE-optimized weights, but only the squared-error form
tracks the residual-based noise estimate the matrix algorithm actually
uses, so it drives the recursion (see decisions ledger).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .amp import DenoiserPolicy, denoise_step, policy_label
from .errors import NumericalError, ParameterError
from .priors import SignalPrior, rng_from_seed, sample_prior
from .kernels import noise_floor

__all__ = ["SeTrajectory", "se_run"]


@dataclass
class SeTrajectory:
    """Predicted effective-noise and MSE sequences.

    ``tau[t]`` is the effective noise entering iteration ``t`` (length
    ``iterations + 1``; ``tau[0]`` is the initialization). ``mse[t]`` is the
    predicted estimate MSE after iteration ``t``; ``sigma_w2 + mse[t]/gamma``
    (= ``tau[t+1]``) is the corresponding effective-noise prediction.
    ``tau_deriv_form[t]`` records the derivative-based update from iteration
    ``t`` for comparison.
    """

    tau: np.ndarray
    mse: np.ndarray
    tau_deriv_form: np.ndarray
    gamma: float
    sigma_w2: float
    prior_label: str
    policy: str
    mc_samples: int
    seed: int


def se_run(
    prior: SignalPrior,
    gamma: float,
    sigma_w2: float,
    policy: DenoiserPolicy,
    mc_samples: int = 100_000,
    iterations: int = 30,
    seed: int = 0,
) -> SeTrajectory:
    """Monte Carlo state evolution for a denoiser policy.

    Fresh samples are drawn every iteration so the parameter selection and
    the expectation estimate stay uncorrelated.
    """
    if not 0.0 < gamma <= 1.0:
        raise ParameterError(f"sampling ratio must be in (0, 1], got {gamma}")
    if sigma_w2 < 0.0:
        raise ParameterError(f"noise variance must be nonnegative, got {sigma_w2}")
    if mc_samples < 10_000:
        raise ParameterError(f"need at least 1e4 Monte Carlo samples, got {mc_samples}")
    if iterations < 1:
        raise ParameterError(f"iterations must be >= 1, got {iterations}")

    seed_seq = np.random.SeedSequence(seed)
    child_seeds = [int(s.generate_state(1, np.uint64)[0]) for s in seed_seq.spawn(2 * iterations + 1)]

    # tau0 = <||y||^2>/m for unit-norm columns expands to sigma_w^2 + E[x^2]/gamma
    x0 = sample_prior(prior, mc_samples, child_seeds[0])
    tau = sigma_w2 + float(np.mean(x0 * x0)) / gamma

    taus = [tau]
    mses = []
    deriv_form = []
    for t in range(iterations):
        x = sample_prior(prior, mc_samples, child_seeds[1 + 2 * t])
        z = rng_from_seed(child_seeds[2 + 2 * t]).normal(0.0, 1.0, mc_samples)
        r = x + np.sqrt(max(tau, 0.0)) * z
        x_hat, nu, _, _ = denoise_step(policy, r, noise_floor(tau))
        mse = float(np.mean((x_hat - x) ** 2))
        deriv_form.append(sigma_w2 + tau * nu / gamma)
        tau = sigma_w2 + mse / gamma
        if not np.isfinite(tau):
            raise NumericalError(f"effective noise became non-finite at iteration {t}")
        taus.append(tau)
        mses.append(mse)

    return SeTrajectory(
        tau=np.asarray(taus),
        mse=np.asarray(mses),
        tau_deriv_form=np.asarray(deriv_form),
        gamma=float(gamma),
        sigma_w2=float(sigma_w2),
        prior_label=prior.label(),
        policy=policy_label(policy),
        mc_samples=int(mc_samples),
        seed=int(seed),
    )
