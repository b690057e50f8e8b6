"""Exception types raised across ksflow."""


class KsflowError(Exception):
    """Base class for every error raised by ksflow."""


class InvalidField(KsflowError, ValueError):
    """A field holds non-finite values or has the wrong shape."""


class NotSupported(KsflowError, ValueError):
    """An operator was asked for an order or axis it does not implement."""


class MeanNotZero(KsflowError, ValueError):
    """A Poisson right-hand side carries a nonzero mean."""


class OutOfDomain(KsflowError, ValueError):
    """An argument lies outside the domain of a constitutive function."""


class InvalidConfig(KsflowError, ValueError):
    """A configuration value violates its invariants."""


class ConfigError(InvalidConfig):
    """A run configuration file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalBreakdown(KsflowError, ArithmeticError):
    """A tendency or step produced NaN or infinite values."""

    def __init__(self, message: str, t: float | None = None, step: int | None = None):
        self.t = t
        self.step = step
        context = []
        if step is not None:
            context.append(f"step {step}")
        if t is not None:
            context.append(f"t={t:.6g}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)


class DtUnderflow(KsflowError):
    """The stable time step fell below the configured minimum."""

    def __init__(self, dt: float, dt_min: float):
        self.dt = dt
        self.dt_min = dt_min
        super().__init__(f"time step {dt:.3e} below dt_min {dt_min:.3e}")


class StaleState(KsflowError, ValueError):
    """A functional was requested on a flagged state."""


class WrongModel(KsflowError, ValueError):
    """A diagnostic was applied to a model it does not hold for."""


class EmptyInput(KsflowError, ValueError):
    """A trajectory, window or grid holds no data."""


class InvalidExponent(KsflowError, ValueError):
    """A norm exponent is out of range."""


class InvalidSeries(KsflowError, ValueError):
    """A time series cannot be analysed as requested."""


class ScaledRunFailed(KsflowError):
    """One side of a scaling pair terminated with a flag."""


class NoBracket(KsflowError):
    """A threshold sweep found no stable/suspect transition."""


class GridMismatch(KsflowError, ValueError):
    """Two fields or trajectories live on different grids."""
