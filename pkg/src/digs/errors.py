"""Exception and warning types shared across the package."""


class DigsError(Exception):
    """Base class for all package errors."""


class ConfigError(DigsError):
    """Malformed configuration file, unknown key or unknown preset."""


class UnknownPresetError(ConfigError):
    pass


class SingularSystemError(DigsError):
    """The open-configuration generator has no unique steady state."""


class NonUniqueKernelError(DigsError):
    """The closed-configuration generator has a kernel of dimension > 1."""


class DegenerateManifoldError(DigsError):
    """A two-level manifold has zero coupling and zero detuning."""


class AnalyticDomainError(DigsError, ZeroDivisionError):
    """A closed-form expression is evaluated at a pole or zero denominator."""


class ConditionViolatedError(DigsError):
    """The two dressed source combinations differ, so a single generalized
    population is not defined.

    Attributes
    ----------
    branch_values : tuple of complex
        The value implied by each branch.
    """

    def __init__(self, message, branch_values):
        super().__init__(message)
        self.branch_values = branch_values


class QuadratureError(DigsError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    estimate : complex
        Best estimate of the integral.
    error : float
        Estimated absolute error.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class GridTooCoarseError(DigsError):
    """The detuning grid cannot resolve a derivative."""


class RegimeWarning(UserWarning):
    """A closed-form result is evaluated outside its validity regime.

    Parameters
    ----------
    message : str
    inequality : str
        The assumption that fails, written as an inequality.
    """

    def __init__(self, message, inequality=""):
        super().__init__(message)
        self.inequality = inequality


class ProbeNonlinearityWarning(UserWarning):
    """Halving the probe Rabi frequency changed the susceptibility noticeably."""
