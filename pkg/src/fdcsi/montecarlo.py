"""Monte Carlo estimates of the outage and effective-rate metrics.

Every estimate is a pure function of its parameters and of the seed.
Random streams come from Philox, a counter-based generator, keyed by
``(seed, *keys)`` so independent grid points get independent streams
regardless of evaluation order.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import sample_joint_pair
from .errors import ConfigurationError, DomainError
from .metrics import LinkStatistics, RateAdaptParams, average_effective_rate, outage_probability, rate

DEFAULT_BATCHES = 32

# cross grid used by the agreement check
GRID_RHO_TILDE = (0.0, 0.5, 0.9, 0.99)
GRID_SIGMA_E_SQ = (0.0, 0.00544, 0.17)
GRID_DELTA = (1.5, 2.0, 3.6)


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 0
    batches: int = DEFAULT_BATCHES

    def __post_init__(self):
        if self.batches < 1 or self.samples < self.batches:
            raise ConfigurationError("need samples >= batches >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples_used: int

    def agrees_with(self, value, n_sigma=3.0):
        return abs(self.mean - value) <= n_sigma * self.std_error


def stream(seed, *keys):
    """Independent generator for ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def _batch_sizes(cfg):
    base, extra = divmod(cfg.samples, cfg.batches)
    return [base + (i < extra) for i in range(cfg.batches)]


def _binomial(hits, n):
    p = hits / n
    return McEstimate(p, math.sqrt(p * (1.0 - p) / n), n)


def _batch_mean(sums, sizes):
    sums = np.asarray(sums, dtype=float)
    sizes = np.asarray(sizes, dtype=float)
    n = int(sizes.sum())
    mean = float(sums.sum() / n)
    if len(sizes) < 2:
        return McEstimate(mean, 0.0, n)
    means = sums / sizes
    return McEstimate(mean, float(np.std(means, ddof=1) / math.sqrt(len(sizes))), n)


def _joint_draws(stats, cfg, rng):
    for size in _batch_sizes(cfg):
        yield size, sample_joint_pair(stats.rho_tilde, stats.sigma_e_sq, rng, size)


def empirical_outage(stats, delta, cfg, rng=None):
    """Fraction of joint draws with ``gamma_next < gamma_hat / delta``."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    rng = stream(cfg.seed) if rng is None else rng
    hits = 0
    for _, (g_hat, g_next) in _joint_draws(stats, cfg, rng):
        hits += int(np.count_nonzero(g_next < g_hat / delta))
    return _binomial(hits, cfg.samples)


def empirical_effective_rate(p, stats, cfg, rng=None):
    """Mean of ``rate(gamma_hat) * 1[gamma_next >= gamma_hat / delta]``."""
    rng = stream(cfg.seed) if rng is None else rng
    sums, sizes = [], []
    for size, (g_hat, g_next) in _joint_draws(stats, cfg, rng):
        eta = np.where(g_next >= g_hat / p.delta, rate(g_hat, p), 0.0)
        sums.append(eta.sum())
        sizes.append(size)
    return _batch_mean(sums, sizes)


def empirical_metrics(p, stats, cfg, rng=None):
    """Outage and effective rate estimated from the same draws."""
    rng = stream(cfg.seed) if rng is None else rng
    hits = 0
    sums, sizes = [], []
    for size, (g_hat, g_next) in _joint_draws(stats, cfg, rng):
        ok = g_next >= g_hat / p.delta
        hits += size - int(np.count_nonzero(ok))
        sums.append(np.where(ok, rate(g_hat, p), 0.0).sum())
        sizes.append(size)
    return _binomial(hits, cfg.samples), _batch_mean(sums, sizes)


def empirical_conditional_outage(gamma_hat, stats, delta, cfg, rng=None, phase=0.0):
    """Outage frequency given a fixed estimate with ``|h_hat|^2 = gamma_hat``.

    The future channel is drawn from its exact Gaussian regression on the
    estimate: mean ``(rho_tilde / sigma^2) h_hat``, variance
    ``1 - rho_tilde^2 / sigma^2``.
    """
    if gamma_hat < 0:
        raise DomainError("gamma_hat must be non-negative")
    rng = stream(cfg.seed) if rng is None else rng
    s2 = stats.sigma_sq
    h_hat = math.sqrt(gamma_hat) * complex(math.cos(phase), math.sin(phase))
    mean = stats.rho_tilde / s2 * h_hat
    resid = math.sqrt(max(1.0 - stats.rho_tilde ** 2 / s2, 0.0) / 2.0)
    threshold = gamma_hat / delta
    hits = 0
    for size in _batch_sizes(cfg):
        h_next = mean + resid * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
        hits += int(np.count_nonzero(np.abs(h_next) ** 2 < threshold))
    return _binomial(hits, cfg.samples)


@dataclass(frozen=True)
class GridCell:
    rho_tilde: float
    sigma_e_sq: float
    delta: float
    pout: float
    mc_pout: McEstimate
    eta: float
    mc_eta: McEstimate

    @property
    def pout_ok(self):
        return self.mc_pout.agrees_with(self.pout)

    @property
    def eta_ok(self):
        return self.mc_eta.agrees_with(self.eta)


def agreement_cell(index, rho_tilde, sigma_e_sq, delta, snr_data, gamma_gap, cfg):
    stats = LinkStatistics(rho_tilde, sigma_e_sq)
    p = RateAdaptParams(snr_data, delta, gamma_gap)
    mc_pout, mc_eta = empirical_metrics(p, stats, cfg, stream(cfg.seed, index))
    return GridCell(
        rho_tilde,
        sigma_e_sq,
        delta,
        outage_probability(stats, delta),
        mc_pout,
        average_effective_rate(p, stats),
        mc_eta,
    )


def agreement_grid(cfg, snr_data, gamma_gap, executor=None):
    """Compare closed forms with Monte Carlo on the standard cross grid.

    ``executor`` may be any ``concurrent.futures`` executor; results are
    identical either way.
    """
    cells = list(itertools.product(GRID_RHO_TILDE, GRID_SIGMA_E_SQ, GRID_DELTA))
    args = [(i, *c, snr_data, gamma_gap, cfg) for i, c in enumerate(cells)]
    if executor is None:
        return [agreement_cell(*a) for a in args]
    return list(executor.map(lambda a: agreement_cell(*a), args))

