"""Rate adaptation under delayed and noisy CSIT with full-duplex CSI acquisition.

The package evaluates outage probability, average effective rate and
bandwidth-normalised throughput for four CSIT acquisition schemes (perfect
CSI, half-duplex probing, full-duplex CSI acquisition and full-duplex data),
together with Monte Carlo oracles for every closed form.
"""

from .errors import ConfigurationError, ConvergenceError, DomainError, InfeasibleTargetError

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ConvergenceError",
    "DomainError",
    "InfeasibleTargetError",
    "__version__",
]
