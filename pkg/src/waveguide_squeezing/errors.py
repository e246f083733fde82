"""Exception hierarchy shared across the package."""


class SimulationError(Exception):
    """Base class for every error raised by waveguide_squeezing."""


class ParameterError(SimulationError, ValueError):
    """Invalid physical, numerical or sweep configuration."""


class NoRealRootError(SimulationError):
    """The steady-state polynomial has no real root."""


class NoStableRootError(SimulationError):
    """Every real steady state fails the drift-matrix stability test."""


class UnstableOperatingPointError(SimulationError):
    """A stationary variance was requested at a dynamically unstable point."""


class ResponsePoleError(SimulationError, ZeroDivisionError):
    """The linear response is singular at the requested frequency."""


class ReconstructionError(SimulationError, ZeroDivisionError):
    """Momentum cannot be recovered from the output field at this point."""


class BudgetExhaustedError(SimulationError):
    """Adaptive quadrature hit its panel limit before meeting tolerance.

    The partial ``value`` and ``error`` estimate are kept on the exception so
    callers may still report them.
    """

    def __init__(self, message, value, error, n_panels):
        super().__init__(message)
        self.value = value
        self.error = error
        self.n_panels = n_panels


class NoInteriorMinimumError(SimulationError):
    """A coarse scan found the objective monotone over the sweep range."""
