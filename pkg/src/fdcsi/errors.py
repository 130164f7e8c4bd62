"""Exception types raised by the fdcsi package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConfigurationError(ValueError):
    """A configuration object is internally inconsistent."""


class InfeasibleTargetError(ValueError):
    """A calibration target cannot be reached inside the search bracket."""


class ConvergenceError(ArithmeticError):
    """An iterative computation stopped before meeting its tolerance.

    The best estimate obtained so far is kept on ``best_estimate`` so callers
    can decide whether it is good enough.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
