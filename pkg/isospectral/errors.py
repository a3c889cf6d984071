"""Exception hierarchy shared by the numerical modules, the CLI and the HTTP surface."""


class IsospectralError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsospectralError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DepthExceededError(IsospectralError):
    """A recurrence was asked for a degree above its guard."""


class ConvergenceError(IsospectralError):
    """A truncation or quadrature failed hard (soft failures are reported as flags)."""


class UndefinedFanoError(IsospectralError):
    """The Fano factor of a state with zero mean photon number was requested."""


class ConfigError(IsospectralError, ValueError):
    """A sweep configuration could not be accepted."""
