"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid model or kernel parameter (wrong range, wrong kind)."""


class ConfigurationError(ValueError):
    """Inconsistent problem or experiment configuration."""


class DegenerateSignalError(ValueError):
    """Signal is degenerate for the requested operation (e.g. all-zero with finite SNR)."""


class CapabilityError(ValueError):
    """Requested denoiser/prior combination is not implemented."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to converge. Carries diagnostics in args."""


class NumericalError(RuntimeError):
    """A numeric quantity left its valid domain (NaN/inf where finite required)."""


class DivergenceError(RuntimeError):
    """The iterative solver diverged. The partial trajectory is attached.

    Attributes
    ----------
    trajectory : object
        Per-iteration records accumulated before the blow-up.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
