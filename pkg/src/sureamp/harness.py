"""Declarative experiment runner with seeded, schema-stable CSV output.

Every experiment resolves to a list of tasks, each carrying an explicit
64-bit seed derived from the base seed with a counter-based scheme, so any
row of the output can be reproduced in isolation. Results go to a CSV with
a fixed, versioned column set plus a JSON sidecar holding the resolved
configuration and provenance.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import yaml

from ._version import __version__
from .amp import (
    amp_run,
    bamp_policy,
    l1amp_policy,
    parametric_sure_policy,
    policy_label,
)
from .errors import DivergenceError
from .denoising import optimize_weights
from .errors import CapabilityError, ConfigurationError
from .kernels import family_by_name
from .priors import (
    PriorKind,
    SignalPrior,
    posterior_mean_denoiser,
    mmse_denoise_bg,
    mmse_denoise_kdense,
    NumericMmseDenoiser,
    rng_from_seed,
    sample_prior,
)
from .sensing import gaussian_operator, measure, snr_x
from .state_evolution import se_run

__all__ = [
    "ExperimentKind",
    "ExperimentConfig",
    "ResultRecord",
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "run_experiment",
    "run_denoise_sweep",
    "run_recovery_sweep",
    "run_se_compare",
    "run_runtime_sweep",
    "write_results",
    "load_results",
    "check_results",
    "task_seed",
    "PRESETS",
    "preset_config",
]

SCHEMA_VERSION = 1
CSV_COLUMNS = [
    "experiment", "prior", "policy", "gamma", "c", "snr_y_db",
    "seed", "metric_name", "metric_value", "iterations", "wall_ms", "mode", "n",
]


class ExperimentKind(str, Enum):
    DENOISE_SWEEP = "denoise-sweep"
    RECOVERY_SWEEP = "recovery-sweep"
    SE_COMPARE = "se-compare"
    RUNTIME_SWEEP = "runtime-sweep"


@dataclass
class ExperimentConfig:
    kind: ExperimentKind
    prior: SignalPrior
    policies: list = field(default_factory=list)     # policy/denoiser names
    n: int = 2000
    gammas: list = field(default_factory=list)
    cs: list = field(default_factory=list)
    n_list: list = field(default_factory=list)       # runtime sweep only
    snr_y_db: Optional[float] = 25.0                 # None = noiseless
    monte_carlo: int = 20
    base_seed: int = 0
    iterations: int = 20                             # se-compare horizon
    se_samples: int = 100_000
    max_iter: int = 100
    tol: float = 1e-6
    name: str = ""

    def __post_init__(self):
        if self.monte_carlo < 1:
            raise ConfigurationError("monte_carlo must be >= 1")
        for g in self.gammas:
            if not 0.0 < g <= 1.0:
                raise ConfigurationError(f"sampling ratio {g} outside (0, 1]")
        for c in self.cs:
            if not c > 0.0:
                raise ConfigurationError(f"noise level {c} must be positive")

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind.value,
            "prior": self.prior.to_record(),
            "policies": list(self.policies),
            "n": self.n,
            "gammas": list(self.gammas),
            "cs": list(self.cs),
            "n_list": list(self.n_list),
            "snr_y_db": self.snr_y_db,
            "monte_carlo": self.monte_carlo,
            "base_seed": self.base_seed,
            "iterations": self.iterations,
            "se_samples": self.se_samples,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "name": self.name,
        }
        return d

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        d = dict(d)
        kind = ExperimentKind(d.pop("kind"))
        prior = SignalPrior.from_record(d.pop("prior"))
        known = {f for f in ExperimentConfig.__dataclass_fields__ if f not in ("kind", "prior")}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return ExperimentConfig(kind=kind, prior=prior, **d)

    @staticmethod
    def from_yaml(path) -> "ExperimentConfig":
        with open(path) as fh:
            return ExperimentConfig.from_dict(yaml.safe_load(fh))

    def scaled(self, scale: float) -> "ExperimentConfig":
        """Desk-scale knob: multiplies n, divides the Monte Carlo count."""
        if scale == 1.0:
            return self
        d = self.to_dict()
        d["n"] = max(1, int(round(self.n * scale)))
        d["n_list"] = [max(1, int(round(v * scale))) for v in self.n_list]
        d["monte_carlo"] = max(1, int(round(self.monte_carlo / scale)))
        return ExperimentConfig.from_dict(d)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class ResultRecord:
    experiment: str
    prior: str
    policy: str
    gamma: Optional[float]
    c: Optional[float]
    snr_y_db: Optional[float]
    seed: int
    metric_name: str
    metric_value: float
    iterations: Optional[int]
    wall_ms: float
    mode: str
    n: int
    config_hash: str = ""

    def row(self) -> list:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return [fmt(getattr(self, col)) for col in CSV_COLUMNS]


def task_seed(base_seed: int, *indices: int) -> int:
    """Explicit 64-bit seed for one task, derived with a splittable scheme."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=tuple(indices))
    return int(ss.generate_state(1, np.uint64)[0])


def _sub_seeds(seed: int, k: int) -> list:
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(k)]


# ---------------------------------------------------------------------------
# denoise sweep

def _denoiser_for(name: str, prior: SignalPrior, c: float, r_max: float):
    """Vectorized (r -> x_hat) for a denoiser name used in sweeps."""
    if name == "mmse":
        den = posterior_mean_denoiser(prior, c, r_scale_hint=r_max)
        return lambda r: den(r)[0]
    if name == "mmse-numeric":
        den = NumericMmseDenoiser(prior, c, r_max=r_max)
        return lambda r: den(r)[0]
    if name.startswith("sure-"):
        family = family_by_name(name.removeprefix("sure-"))
        return lambda r: _sure_denoise(r, c, family)
    raise CapabilityError(f"unknown denoiser {name!r} for a denoising sweep")


def _sure_denoise(r, c, family):
    spec = optimize_weights(r, c, family)
    F, _ = spec.family.matrix(r, c)
    return F @ spec.weights


def run_denoise_sweep(cfg: ExperimentConfig, workers: int = 1) -> list:
    """MSE of each denoiser on fresh prior samples plus N(0, c) noise.

    One record per (c, denoiser, repetition); the repetition seed fully
    determines the data.
    """
    if cfg.kind != ExperimentKind.DENOISE_SWEEP:
        raise ConfigurationError(f"config kind is {cfg.kind}, expected denoise-sweep")
    records = []
    chash = cfg.config_hash()
    for ci, c in enumerate(cfg.cs):
        for rep in range(cfg.monte_carlo):
            seed = task_seed(cfg.base_seed, ci, rep)
            sig_seed, noise_seed = _sub_seeds(seed, 2)
            x = sample_prior(cfg.prior, cfg.n, sig_seed)
            r = x + rng_from_seed(noise_seed).normal(0.0, math.sqrt(c), cfg.n)
            r_max = float(np.max(np.abs(r))) * 1.05
            for name in cfg.policies:
                t0 = time.perf_counter()
                x_hat = _denoiser_for(name, cfg.prior, c, r_max)(r)
                wall = (time.perf_counter() - t0) * 1e3
                mse = float(np.mean((x_hat - x) ** 2))
                records.append(ResultRecord(
                    experiment=cfg.kind.value, prior=cfg.prior.label(), policy=name,
                    gamma=None, c=float(c), snr_y_db=None, seed=seed,
                    metric_name="mse", metric_value=mse, iterations=None,
                    wall_ms=wall, mode="denoise", n=cfg.n, config_hash=chash,
                ))
    return records


# ---------------------------------------------------------------------------
# recovery sweep

def _policy_from_name(name: str, prior: SignalPrior):
    if name == "bamp":
        return bamp_policy(prior)
    if name.startswith("l1amp"):
        kappa = float(name.split("-k", 1)[1]) if "-k" in name else 2.0
        return l1amp_policy(kappa)
    if name.startswith("sure-"):
        return parametric_sure_policy(name.removeprefix("sure-"))
    raise CapabilityError(f"unknown policy {name!r}")


def _recovery_cell(args):
    """One (gamma, seed) cell: shared instance, every policy on the same data."""
    cfg_dict, gamma, gi, si = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    seed = task_seed(cfg.base_seed, gi, si)
    op_seed, sig_seed, noise_seed = _sub_seeds(seed, 3)
    m = int(round(gamma * cfg.n))
    op = gaussian_operator(m, cfg.n, op_seed)
    x = sample_prior(cfg.prior, cfg.n, sig_seed)
    meas = measure(op, x, cfg.snr_y_db, noise_seed)
    rows = []
    chash = cfg.config_hash()
    for name in cfg.policies:
        policy = _policy_from_name(name, cfg.prior)
        t0 = time.perf_counter()
        try:
            res = amp_run(op, meas.y, policy, max_iter=cfg.max_iter, tol=cfg.tol, x_true=x)
            metric_name, value = "snr_x_db", snr_x(x, res.x_hat)
            iters = res.iterations
        except DivergenceError:
            metric_name, value, iters = "error_divergence", math.nan, None
        wall = (time.perf_counter() - t0) * 1e3
        rows.append(ResultRecord(
            experiment=cfg.kind.value, prior=cfg.prior.label(), policy=name,
            gamma=float(gamma), c=None, snr_y_db=cfg.snr_y_db, seed=seed,
            metric_name=metric_name, metric_value=float(value), iterations=iters,
            wall_ms=wall, mode="matrix", n=cfg.n, config_hash=chash,
        ))
    return rows


def run_recovery_sweep(cfg: ExperimentConfig, workers: int = 1) -> list:
    """SNR_x of each policy per sampling ratio, fresh instance per seed.

    Solver failures are recorded per seed (``error_divergence`` rows) and
    the sweep continues.
    """
    if cfg.kind != ExperimentKind.RECOVERY_SWEEP:
        raise ConfigurationError(f"config kind is {cfg.kind}, expected recovery-sweep")
    tasks = [(cfg.to_dict(), g, gi, si)
             for gi, g in enumerate(cfg.gammas) for si in range(cfg.monte_carlo)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_recovery_cell, tasks))
    else:
        cells = [_recovery_cell(t) for t in tasks]
    return [row for cell in cells for row in cell]


# ---------------------------------------------------------------------------
# state-evolution comparison

def _se_compare_matrix_cell(args):
    cfg_dict, gamma, gi, si = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    seed = task_seed(cfg.base_seed, gi, si)
    op_seed, sig_seed, noise_seed = _sub_seeds(seed, 3)
    m = int(round(gamma * cfg.n))
    op = gaussian_operator(m, cfg.n, op_seed)
    x = sample_prior(cfg.prior, cfg.n, sig_seed)
    meas = measure(op, x, cfg.snr_y_db, noise_seed)
    policy = _policy_from_name(cfg.policies[0], cfg.prior)
    t0 = time.perf_counter()
    # fixed horizon: the convergence test is disabled so every iteration is recorded
    res = amp_run(op, meas.y, policy, max_iter=cfg.iterations, tol=1e-300, x_true=x)
    wall = (time.perf_counter() - t0) * 1e3
    chash = cfg.config_hash()
    return [ResultRecord(
        experiment=cfg.kind.value, prior=cfg.prior.label(), policy=cfg.policies[0],
        gamma=float(gamma), c=None, snr_y_db=cfg.snr_y_db, seed=seed,
        metric_name="mse_at_iter", metric_value=float(v), iterations=t + 1,
        wall_ms=wall, mode="matrix", n=cfg.n, config_hash=chash,
    ) for t, v in enumerate(res.trajectory.mse)]


def run_se_compare(cfg: ExperimentConfig, workers: int = 1) -> list:
    """Paired per-iteration MSE records: matrix Monte Carlo vs SE prediction."""
    if cfg.kind != ExperimentKind.SE_COMPARE:
        raise ConfigurationError(f"config kind is {cfg.kind}, expected se-compare")
    if len(cfg.policies) != 1:
        raise ConfigurationError("se-compare runs one policy at a time")
    if not cfg.gammas:
        raise ConfigurationError("se-compare needs a non-empty gamma grid")
    records = []
    chash = cfg.config_hash()
    tasks = [(cfg.to_dict(), g, gi, si)
             for gi, g in enumerate(cfg.gammas) for si in range(cfg.monte_carlo)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_se_compare_matrix_cell, tasks))
    else:
        cells = [_se_compare_matrix_cell(t) for t in tasks]
    records.extend(row for cell in cells for row in cell)
    for gi, gamma in enumerate(cfg.gammas):
        seed = task_seed(cfg.base_seed, gi, 1_000_000)
        sigma_w2 = _se_noise_variance(cfg, gamma)
        policy = _policy_from_name(cfg.policies[0], cfg.prior)
        t0 = time.perf_counter()
        traj = se_run(cfg.prior, gamma, sigma_w2, policy,
                      mc_samples=cfg.se_samples, iterations=cfg.iterations, seed=seed)
        wall = (time.perf_counter() - t0) * 1e3
        records.extend(ResultRecord(
            experiment=cfg.kind.value, prior=cfg.prior.label(), policy=cfg.policies[0],
            gamma=float(gamma), c=None, snr_y_db=cfg.snr_y_db, seed=seed,
            metric_name="mse_at_iter", metric_value=float(v), iterations=t + 1,
            wall_ms=wall, mode="SE", n=cfg.se_samples, config_hash=chash,
        ) for t, v in enumerate(traj.mse))
    return records


def _se_noise_variance(cfg: ExperimentConfig, gamma: float) -> float:
    """Measurement-noise variance implied by the configured SNR_y."""
    if cfg.snr_y_db is None:
        return 0.0
    # E||Phi x||^2 = n E[x^2] for unit-norm columns, so per measurement
    # the clean power is E[x^2] / gamma
    from .priors import prior_second_moment

    ex2 = prior_second_moment(cfg.prior)
    if not math.isfinite(ex2):
        # heavy-tailed priors have no population second moment; estimate it
        x = sample_prior(cfg.prior, 1_000_000, task_seed(cfg.base_seed, 424242))
        ex2 = float(np.mean(x * x))
    return (ex2 / gamma) / (10.0 ** (cfg.snr_y_db / 10.0))


# ---------------------------------------------------------------------------
# runtime sweep

def run_runtime_sweep(cfg: ExperimentConfig, workers: int = 1) -> list:
    """Wall time per policy versus signal length at gamma = 0.5.

    The first repetition of every (n, policy) cell is a discarded warm-up;
    the median over the remaining repetitions is recorded alongside the
    per-repetition times.
    """
    if cfg.kind != ExperimentKind.RUNTIME_SWEEP:
        raise ConfigurationError(f"config kind is {cfg.kind}, expected runtime-sweep")
    if not cfg.n_list:
        raise ConfigurationError("runtime sweep needs n_list")
    gamma = cfg.gammas[0] if cfg.gammas else 0.5
    records = []
    chash = cfg.config_hash()
    for ni, n in enumerate(cfg.n_list):
        m = int(round(gamma * n))
        for name in cfg.policies:
            policy_times = []
            for rep in range(cfg.monte_carlo + 1):  # rep 0 is warm-up
                seed = task_seed(cfg.base_seed, ni, rep)
                op_seed, sig_seed, noise_seed = _sub_seeds(seed, 3)
                op = gaussian_operator(m, n, op_seed)
                x = sample_prior(cfg.prior, n, sig_seed)
                meas = measure(op, x, cfg.snr_y_db, noise_seed)
                policy = _policy_from_name(name, cfg.prior)
                t0 = time.perf_counter()
                res = amp_run(op, meas.y, policy, max_iter=cfg.max_iter, tol=cfg.tol)
                wall = (time.perf_counter() - t0) * 1e3
                if rep == 0:
                    continue
                policy_times.append(wall)
                records.append(ResultRecord(
                    experiment=cfg.kind.value, prior=cfg.prior.label(), policy=name,
                    gamma=float(gamma), c=None, snr_y_db=cfg.snr_y_db, seed=seed,
                    metric_name="wall_ms", metric_value=wall, iterations=res.iterations,
                    wall_ms=wall, mode="matrix", n=n, config_hash=chash,
                ))
            records.append(ResultRecord(
                experiment=cfg.kind.value, prior=cfg.prior.label(), policy=name,
                gamma=float(gamma), c=None, snr_y_db=cfg.snr_y_db,
                seed=task_seed(cfg.base_seed, ni, 0),
                metric_name="wall_ms_median", metric_value=float(np.median(policy_times)),
                iterations=None, wall_ms=float(np.median(policy_times)),
                mode="matrix", n=n, config_hash=chash,
            ))
    return records


# ---------------------------------------------------------------------------
# IO

def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list:
    runner = {
        ExperimentKind.DENOISE_SWEEP: run_denoise_sweep,
        ExperimentKind.RECOVERY_SWEEP: run_recovery_sweep,
        ExperimentKind.SE_COMPARE: run_se_compare,
        ExperimentKind.RUNTIME_SWEEP: run_runtime_sweep,
    }[cfg.kind]
    return runner(cfg, workers=workers)


def write_results(records: Sequence[ResultRecord], cfg: ExperimentConfig, out_csv) -> Path:
    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "columns": CSV_COLUMNS,
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "package_version": __version__,
    }
    with open(out_csv.with_suffix(out_csv.suffix + ".meta.json"), "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
    return out_csv


def load_results(csv_path) -> list:
    """Rows as dicts with numeric fields parsed (inverse of write_results)."""
    rows = []
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ConfigurationError(
                f"unexpected CSV schema {reader.fieldnames}, expected {CSV_COLUMNS}"
            )
        for raw in reader:
            row = dict(raw)
            for key in ("gamma", "c", "snr_y_db", "metric_value", "wall_ms"):
                row[key] = float(row[key]) if row[key] != "" else None
            for key in ("seed", "iterations", "n"):
                row[key] = int(row[key]) if row[key] != "" else None
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# reference checks (--check)

# published denoising MSE references: (prior predicate, c) -> {denoiser: value}
_FIG2_REFS = {"mmse": 0.020615, "sure-pwl1": 0.020788, "sure-exp": 0.022047}
_FIG4_REFS = {"mmse": 0.0243, "sure-pwl2": 0.0248, "sure-pwl1": 0.0251}
_TABLE_T_REFS = {
    0.01: {"sure-pwl1": 9.9383e-3, "sure-exp": 9.9948e-3},
    0.1: {"sure-pwl1": 0.0955, "sure-exp": 0.0967},
    1.0: {"sure-pwl1": 0.7191, "sure-exp": 0.7200},
    5.0: {"sure-pwl1": 2.1560, "sure-exp": 2.1504},
    10.0: {"sure-pwl1": 3.1764, "sure-exp": 3.1606},
    50.0: {"sure-pwl1": 6.6554, "sure-exp": 6.9979},
    100.0: {"sure-pwl1": 8.6245, "sure-exp": 9.6347},
}


def _mean_metric(rows, metric="snr_x_db", **filters):
    vals = [r["metric_value"] for r in rows
            if r["metric_name"] == metric
            and all(r[k] == v for k, v in filters.items())
            and not math.isnan(r["metric_value"])]
    return float(np.mean(vals)) if vals else math.nan


def check_results(rows: Sequence[dict], cfg: ExperimentConfig) -> list:
    """Evaluate published-value tolerances applicable to this config.

    Returns (name, passed, detail) triples; only checks whose setting
    matches the config are evaluated.
    """
    checks = []
    kind = cfg.kind
    prior = cfg.prior

    if kind == ExperimentKind.DENOISE_SWEEP:
        if prior.kind == PriorKind.BERNOULLI_GAUSSIAN and prior.lam == 0.1 and prior.sigma_x2 == 1.0:
            for pol, ref in _FIG2_REFS.items():
                got = _mean_metric(rows, "mse", policy=pol, c=0.1)
                if not math.isnan(got):
                    checks.append((f"bg-denoise c=0.1 {pol}", abs(got - ref) <= 0.05 * ref,
                                   f"{got:.6g} vs {ref} +-5%"))
        if prior.kind == PriorKind.K_DENSE and prior.lam == 0.1 and prior.zeta == 1.0:
            for pol, ref in _FIG4_REFS.items():
                got = _mean_metric(rows, "mse", policy=pol, c=0.1)
                if not math.isnan(got):
                    checks.append((f"kdense-denoise c=0.1 {pol}", abs(got - ref) <= 0.05 * ref,
                                   f"{got:.6g} vs {ref} +-5%"))
        if prior.kind == PriorKind.STUDENT_T and abs(prior.q - 1.67) < 1e-12:
            for c, refs in _TABLE_T_REFS.items():
                for pol, ref in refs.items():
                    got = _mean_metric(rows, "mse", policy=pol, c=c)
                    if not math.isnan(got):
                        checks.append((f"t-denoise c={c:g} {pol}",
                                       abs(got - ref) <= 0.03 * ref,
                                       f"{got:.6g} vs {ref} +-3%"))
                got_mmse = _mean_metric(rows, "mse", policy="mmse", c=c)
                if not math.isnan(got_mmse):
                    bound = min(refs.values()) * 1.03
                    checks.append((f"t-denoise c={c:g} mmse<=families",
                                   got_mmse <= bound, f"{got_mmse:.6g} <= {bound:.6g}"))

    elif kind == ExperimentKind.RECOVERY_SWEEP:
        if prior.kind == PriorKind.BERNOULLI_GAUSSIAN:
            for g in (0.24, 0.3, 0.4):
                if g in cfg.gammas and {"sure-pwl1", "bamp"} <= set(cfg.policies):
                    gap = (_mean_metric(rows, gamma=g, policy="bamp")
                           - _mean_metric(rows, gamma=g, policy="sure-pwl1"))
                    checks.append((f"bg-recovery gamma={g} pwl1-vs-bamp",
                                   gap <= 0.5, f"gap {gap:.3f} dB <= 0.5"))
            if 0.4 in cfg.gammas and {"sure-pwl1", "sure-exp", "bamp"} <= set(cfg.policies):
                b = _mean_metric(rows, gamma=0.4, policy="bamp")
                p = _mean_metric(rows, gamma=0.4, policy="sure-pwl1")
                e = _mean_metric(rows, gamma=0.4, policy="sure-exp")
                checks.append(("bg-ordering gamma=0.4 bamp>=pwl1>=exp",
                               b >= p >= e, f"bamp {b:.2f}, pwl1 {p:.2f}, exp {e:.2f}"))
                l1 = [pol for pol in cfg.policies if pol.startswith("l1amp")]
                if l1:
                    l1v = _mean_metric(rows, gamma=0.4, policy=l1[0])
                    checks.append(("bg-ordering gamma=0.4 pwl1-l1>=2dB",
                                   e > l1v and p - l1v >= 2.0,
                                   f"pwl1 {p:.2f}, exp {e:.2f}, l1 {l1v:.2f}"))
        if prior.kind == PriorKind.K_DENSE and {"sure-pwl2", "bamp"} <= set(cfg.policies):
            for g in (0.55, 0.6):
                if g in cfg.gammas:
                    gap = (_mean_metric(rows, gamma=g, policy="bamp")
                           - _mean_metric(rows, gamma=g, policy="sure-pwl2"))
                    checks.append((f"kdense-recovery gamma={g} pwl2-vs-bamp",
                                   gap <= 0.8, f"gap {gap:.3f} dB <= 0.8"))

    elif kind == ExperimentKind.SE_COMPARE:
        for g in cfg.gammas:
            for t in range(1, cfg.iterations + 1):
                mx = [r["metric_value"] for r in rows
                      if r["mode"] == "matrix" and r["gamma"] == g and r["iterations"] == t]
                se = [r["metric_value"] for r in rows
                      if r["mode"] == "SE" and r["gamma"] == g and r["iterations"] == t]
                if not mx or not se:
                    continue
                # geometric mean across seeds: SE predicts the typical
                # trajectory of a log-scale decaying quantity
                mx_agg = float(np.exp(np.mean(np.log(np.maximum(mx, 1e-300)))))
                ok = abs(se[0] - mx_agg) <= max(0.05 * mx_agg, 1e-6)
                if not ok:
                    checks.append((f"se-agreement gamma={g} iter={t}", False,
                                   f"SE {se[0]:.4g} vs matrix {mx_agg:.4g}"))
            checks.append((f"se-agreement gamma={g}",
                           not any(c[0].startswith(f"se-agreement gamma={g} iter") for c in checks),
                           "5% relative or 1e-6 absolute at every iteration"))

    elif kind == ExperimentKind.RUNTIME_SWEEP:
        med = {(r["n"], r["policy"]): r["metric_value"] for r in rows
               if r["metric_name"] == "wall_ms_median"}
        for name in cfg.policies:
            for n in cfg.n_list:
                if (2 * n, name) in med and (n, name) in med:
                    factor = med[(2 * n, name)] / med[(n, name)]
                    checks.append((f"runtime-scaling {name} n={n}->{2*n}",
                                   2.8 <= factor <= 5.2, f"factor {factor:.2f} in [2.8, 5.2]"))
    return checks


# ---------------------------------------------------------------------------
# canonical experiment presets (paper settings at desk scale)

def preset_config(name: str) -> ExperimentConfig:
    try:
        factory = PRESETS[name][0]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; see list-experiments") from None
    return factory()


def _presets():
    from .priors import bernoulli_gaussian, k_dense, student_t

    bg = bernoulli_gaussian(0.1, 1.0)
    kd = k_dense(0.1, 1.0)
    tt = student_t(1.67)
    return {
        "bg-denoise": (lambda: ExperimentConfig(
            kind=ExperimentKind.DENOISE_SWEEP, prior=bg, n=100_000, monte_carlo=10,
            cs=[0.1], policies=["mmse", "sure-pwl1", "sure-exp"], name="bg-denoise"),
            "BG denoising at c=0.1: MMSE vs SURE kernel fits"),
        "kdense-denoise": (lambda: ExperimentConfig(
            kind=ExperimentKind.DENOISE_SWEEP, prior=kd, n=100_000, monte_carlo=10,
            cs=[0.1], policies=["mmse", "sure-pwl2", "sure-pwl1"], name="kdense-denoise"),
            "k-dense denoising at c=0.1"),
        "t-denoise": (lambda: ExperimentConfig(
            kind=ExperimentKind.DENOISE_SWEEP, prior=tt, n=10_000, monte_carlo=100,
            cs=[0.01, 0.1, 1.0, 5.0, 10.0, 50.0, 100.0],
            policies=["mmse", "sure-pwl1", "sure-exp"], name="t-denoise"),
            "Student's-t denoising table over noise levels"),
        "bg-recover": (lambda: ExperimentConfig(
            kind=ExperimentKind.RECOVERY_SWEEP, prior=bg, n=2000, monte_carlo=20,
            gammas=[0.24, 0.3, 0.4], snr_y_db=25.0,
            policies=["bamp", "sure-pwl1", "sure-exp", "l1amp"], name="bg-recover"),
            "BG recovery vs sampling ratio at SNR_y = 25 dB"),
        "kdense-recover": (lambda: ExperimentConfig(
            kind=ExperimentKind.RECOVERY_SWEEP, prior=kd, n=4000, monte_carlo=20,
            gammas=[0.55, 0.6], snr_y_db=28.0,
            policies=["bamp", "sure-pwl2", "sure-pwl1"], name="kdense-recover"),
            "k-dense recovery at SNR_y = 28 dB (n=4000: the 0.55 cell stalls on ~8% of"
            " realizations at n=2000, a phase-edge finite-size artifact)"),
        "t-recover": (lambda: ExperimentConfig(
            kind=ExperimentKind.RECOVERY_SWEEP, prior=tt, n=2000, monte_carlo=10,
            gammas=[0.4, 0.5, 0.6], snr_y_db=25.0,
            policies=["bamp", "sure-pwl1", "sure-exp", "l1amp"], name="t-recover"),
            "Student's-t recovery at SNR_y = 25 dB"),
        "bg-se": (lambda: ExperimentConfig(
            kind=ExperimentKind.SE_COMPARE, prior=bg, n=10_000, monte_carlo=50,
            gammas=[0.2, 0.25, 0.3], snr_y_db=None, iterations=20,
            policies=["sure-pwl1"], se_samples=1_000_000, name="bg-se"),
            "Noiseless BG: state evolution vs matrix Monte Carlo"),
        "runtime": (lambda: ExperimentConfig(
            kind=ExperimentKind.RUNTIME_SWEEP, prior=bg, monte_carlo=5,
            n_list=[2000, 4000], gammas=[0.5], snr_y_db=25.0,
            policies=["sure-pwl1", "l1amp"], name="runtime"),
            "Wall time vs signal length at gamma = 0.5"),
    }


PRESETS = _presets()
