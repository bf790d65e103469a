"""Compressed-sensing recovery with SURE-tuned parametric denoisers.

The solver family is AMP with three per-iteration denoiser policies:
kernel denoisers tuned by minimizing Stein's unbiased risk estimate
(prior-blind), the genie posterior-mean denoiser of the true prior, and
plain soft thresholding. A scalar-channel state-evolution predictor and a
seeded benchmark harness round out the toolkit.
"""

from ._version import __version__
from .errors import (
    CapabilityError,
    ConfigurationError,
    DegenerateSignalError,
    DivergenceError,
    NumericalError,
    ParameterError,
    QuadratureError,
)
from .priors import (
    NumericMmseDenoiser,
    PriorKind,
    SignalPrior,
    bernoulli_gaussian,
    k_dense,
    mmse_denoise_bg,
    mmse_denoise_kdense,
    mmse_denoise_numeric,
    prior_pdf,
    prior_second_moment,
    rng_from_seed,
    sample_prior,
    student_t,
)
from .sensing import Measurement, SensingOperator, gaussian_operator, measure, snr_x
from .kernels import EXPONENTIAL, FAMILIES, PWL1, PWL2, KernelFamily, kernel_eval, register_family
from .denoising import DenoiserSpec, apply_denoiser, optimize_weights, soft_threshold, sure_value
from .amp import (
    AmpState,
    GenieBampPolicy,
    L1AmpPolicy,
    ParametricSurePolicy,
    RecoveryResult,
    amp_run,
    bamp_policy,
    l1amp_policy,
    parametric_sure_policy,
)
from .state_evolution import SeTrajectory, se_run
from .harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentKind,
    ResultRecord,
    check_results,
    load_results,
    preset_config,
    run_experiment,
    write_results,
)
