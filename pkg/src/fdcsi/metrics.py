"""Closed-form and quadrature metrics of rate adaptation with delayed CSIT.

The UE picks the rate ``ln(1 + snr * gamma_hat / (delta * gap))`` from a
delayed, noisy estimate ``gamma_hat`` and is in outage when the channel at
transmission time falls below ``gamma_hat / delta``.  Everything is in
linear units and nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleTargetError
from .quadrature import integrate_semi_infinite
from .specfun import marcum_q1
from .units import db_to_linear

# below this 1 - rho^2 is treated as perfect correlation
PERFECT_CORRELATION_EPS = 1e-12
BACKOFF_BRACKET = (1e-6, 1e6)
DEFAULT_ABS_TOL = 1e-8
DEFAULT_REL_TOL = 1e-7


@dataclass(frozen=True)
class RateAdaptParams:
    snr_data: float
    delta: float
    gamma_gap: float = 1.0

    def __post_init__(self):
        if not (self.snr_data > 0 and self.delta > 0 and self.gamma_gap > 0):
            raise DomainError("snr_data, delta and gamma_gap must be positive")

    @classmethod
    def from_db(cls, snr_db, delta_db, gap_db=0.0):
        return cls(db_to_linear(snr_db), db_to_linear(delta_db), db_to_linear(gap_db))


@dataclass(frozen=True)
class LinkStatistics:
    """Second-order statistics of (estimate, future channel).

    ``rho_tilde`` is the channel autocorrelation at the CSI delay and
    ``sigma_e_sq`` the estimation-error variance.
    """

    rho_tilde: float
    sigma_e_sq: float = 0.0

    def __post_init__(self):
        if not abs(self.rho_tilde) <= 1:
            raise DomainError("|rho_tilde| must not exceed 1")
        if not self.sigma_e_sq >= 0:
            raise DomainError("sigma_e_sq must be non-negative")

    @property
    def sigma_sq(self):
        return 1.0 + self.sigma_e_sq

    @property
    def rho(self):
        return self.rho_tilde / math.sqrt(self.sigma_sq)


def rate(gamma_hat, p):
    """Rate in nats/symbol selected for an estimated SNR ``gamma_hat``."""
    return np.log1p(p.snr_data * np.asarray(gamma_hat, dtype=float) / (p.delta * p.gamma_gap))


def success_probability(gamma_hat, stats, delta):
    """``1 - conditional_outage``, computed without the subtraction."""
    g = np.asarray(gamma_hat, dtype=float)
    rho_sq = stats.rho * stats.rho
    one_minus = 1.0 - rho_sq
    if one_minus < PERFECT_CORRELATION_EPS:
        # the conditional law collapses onto gamma_next = rho^2 gamma_hat / sigma^2
        ok = 1.0 if delta * rho_sq >= stats.sigma_sq else 0.0
        return np.where(g > 0, ok, 1.0)
    a = np.sqrt(2.0 * rho_sq * g / (one_minus * stats.sigma_sq))
    b = np.sqrt(2.0 * g / (one_minus * delta))
    return marcum_q1(a, b)


def conditional_outage(gamma_hat, stats, delta):
    """Outage probability given the estimate ``gamma_hat``."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    out = 1.0 - success_probability(gamma_hat, stats, delta)
    return float(out) if np.ndim(out) == 0 else out


def outage_probability(stats, delta):
    """Average outage probability over the Exp(sigma^2) estimate law."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    s2 = stats.sigma_sq
    disc = (delta + s2) ** 2 - 4.0 * stats.rho_tilde ** 2 * delta
    assert disc >= 0, "discriminant cannot be negative for |rho_tilde| <= 1"
    if disc == 0.0:
        # only at rho_tilde^2 = 1, sigma^2 = delta = 1: the step limit
        return 0.0
    p = 0.5 + (s2 - delta) / (2.0 * math.sqrt(disc))
    return min(max(p, 0.0), 1.0)


def outage_probability_numeric(stats, delta, abs_tol=1e-10, rel_tol=1e-9):
    """Outage averaged by quadrature of :func:`conditional_outage`."""
    s2 = stats.sigma_sq

    def integrand(x):
        return conditional_outage(x, stats, delta) * np.exp(-x / s2) / s2

    return integrate_semi_infinite(integrand, s2, abs_tol, rel_tol).value


def average_effective_rate(p, stats, tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL):
    """Mean of ``(1 - outage) * rate`` over the estimate distribution.

    Propagates :class:`~fdcsi.errors.ConvergenceError` from the quadrature.
    """
    s2 = stats.sigma_sq

    def integrand(x):
        return success_probability(x, stats, p.delta) * np.exp(-x / s2) * rate(x, p) / s2

    return integrate_semi_infinite(integrand, s2, tol, rel_tol).value


def calibrate_backoff(target_pout, stats):
    """Backoff ``delta`` whose average outage equals ``target_pout``.

    Bisection in log-delta over ``BACKOFF_BRACKET``; the outage is strictly
    decreasing in delta for ``|rho_tilde| < 1``.
    """
    if not 0 < target_pout < 1:
        raise DomainError("target_pout must lie in (0, 1)")
    if target_pout == 0.5 and abs(stats.rho_tilde) < 1:
        return stats.sigma_sq
    lo, hi = BACKOFF_BRACKET
    p_lo, p_hi = outage_probability(stats, lo), outage_probability(stats, hi)
    if not p_hi <= target_pout <= p_lo:
        raise InfeasibleTargetError(
            f"target {target_pout} outside reachable range [{p_hi:.3g}, {p_lo:.3g}]"
        )
    log_lo, log_hi = math.log(lo), math.log(hi)
    while log_hi - log_lo > 1e-12:
        mid = 0.5 * (log_lo + log_hi)
        if outage_probability(stats, math.exp(mid)) > target_pout:
            log_lo = mid
        else:
            log_hi = mid
    return math.exp(0.5 * (log_lo + log_hi))
