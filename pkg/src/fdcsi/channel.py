"""Physical-layer parameterisation of the time-varying Rayleigh channel.

Covers Doppler and temporal autocorrelation, the channel-estimation error
model, the correlated (estimate, future channel) sampler used by the Monte
Carlo oracles, and a symbol-level simulation of full-duplex pilot
reception.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .specfun import bessel_j0

SPEED_OF_LIGHT = 299_792_458.0
# returned by coherence_symbol_budget for a static channel
COHERENCE_CAP = 2**31 - 1
# first zero of J0; J0 decreases monotonically from 1 to 0 on [0, J0_FIRST_ZERO]
J0_FIRST_ZERO = 2.404825557695773


@dataclass(frozen=True)
class FadingParams:
    carrier_hz: float
    speed_kmh: float
    csi_delay_s: float = 0.0

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise DomainError("carrier_hz must be positive")
        if self.speed_kmh < 0 or self.csi_delay_s < 0:
            raise DomainError("speed_kmh and csi_delay_s must be non-negative")

    @property
    def doppler_hz(self):
        return doppler_frequency(self.speed_kmh, self.carrier_hz)

    @property
    def rho_tilde(self):
        return autocorrelation(self.doppler_hz, self.csi_delay_s)


@dataclass(frozen=True)
class EstimationModel:
    """Estimation error model ``sigma_e^2 = c_e / sinr_csi``.

    ``sinr_csi`` may be ``math.inf`` to represent error-free estimation.
    """

    c_e: float
    sinr_csi: float

    def __post_init__(self):
        if not self.c_e > 0:
            raise DomainError("c_e must be positive")
        if not self.sinr_csi > 0:
            raise DomainError("sinr_csi must be positive")

    @property
    def sigma_e_sq(self):
        return estimation_variance(self)

    @property
    def sigma_sq(self):
        return 1.0 + self.sigma_e_sq


@dataclass(frozen=True)
class SelfInterferenceParams:
    inr: float
    mu: complex = 0.0

    def __post_init__(self):
        if self.inr < 0:
            raise DomainError("inr must be non-negative")


@dataclass(frozen=True)
class PilotSimConfig:
    n_bs: int
    pilot_len: int
    snr_dl_per_bs: tuple
    si: SelfInterferenceParams = field(default_factory=lambda: SelfInterferenceParams(0.0))

    def __post_init__(self):
        if self.n_bs < 1:
            raise ConfigurationError("n_bs must be at least 1")
        if self.pilot_len < self.n_bs:
            raise ConfigurationError(
                f"pilot_len={self.pilot_len} cannot hold {self.n_bs} orthogonal pilots"
            )
        if len(self.snr_dl_per_bs) != self.n_bs:
            raise ConfigurationError("need one downlink SNR per base station")
        if any(not s > 0 for s in self.snr_dl_per_bs):
            raise ConfigurationError("downlink SNRs must be positive")


@dataclass(frozen=True)
class JointSample:
    """Estimated SNR at the last CSI update and true SNR at transmission."""

    gamma_hat: float
    gamma_next: float


def doppler_frequency(speed_kmh, carrier_hz):
    """Maximum Doppler shift in Hz for a UE moving at ``speed_kmh``."""
    if speed_kmh < 0:
        raise DomainError("speed must be non-negative")
    if not carrier_hz > 0:
        raise DomainError("carrier frequency must be positive")
    return (speed_kmh / 3.6) * carrier_hz / SPEED_OF_LIGHT


def autocorrelation(f_d, delay_s):
    """Clarke/Jakes autocorrelation ``J0(2 pi f_d delay)``."""
    if f_d < 0 or delay_s < 0:
        raise DomainError("Doppler frequency and delay must be non-negative")
    return bessel_j0(2.0 * math.pi * f_d * delay_s)


def estimation_variance(model):
    return model.c_e / model.sinr_csi


def normalized_correlation(rho_tilde, sigma_e_sq):
    """Correlation between the noisy estimate and the future channel."""
    return rho_tilde / math.sqrt(1.0 + sigma_e_sq)


def _cn(rng, size, var=1.0):
    """Circularly-symmetric complex Gaussian samples with variance ``var``."""
    scale = math.sqrt(var / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def sample_joint_complex(rho_tilde, sigma_e_sq, rng, size):
    """Draw ``(h_hat, h_next)`` arrays of the underlying complex channel.

    ``h_next = rho_tilde * h + sqrt(1 - rho_tilde^2) * w`` and
    ``h_hat = h + e`` with ``e ~ CN(0, sigma_e_sq)``.
    """
    if abs(rho_tilde) > 1 or sigma_e_sq < 0:
        raise DomainError("need |rho_tilde| <= 1 and sigma_e_sq >= 0")
    h = _cn(rng, size)
    w = _cn(rng, size)
    e = _cn(rng, size, sigma_e_sq) if sigma_e_sq > 0 else np.zeros(size, dtype=complex)
    h_next = rho_tilde * h + math.sqrt(1.0 - rho_tilde * rho_tilde) * w
    return h + e, h_next


def sample_joint_pair(rho_tilde, sigma_e_sq, rng, size=None):
    """Draw (gamma_hat, gamma_next) from the joint law of estimate and channel.

    With ``size=None`` a single :class:`JointSample` is returned; otherwise
    a tuple of two arrays of length ``size``.
    """
    n = 1 if size is None else size
    h_hat, h_next = sample_joint_complex(rho_tilde, sigma_e_sq, rng, n)
    gamma_hat = np.abs(h_hat) ** 2
    gamma_next = np.abs(h_next) ** 2
    if size is None:
        return JointSample(float(gamma_hat[0]), float(gamma_next[0]))
    return gamma_hat, gamma_next


def orthogonal_pilots(n_bs, pilot_len):
    """Rows of the DFT matrix: unit-modulus symbols, ``p_j^H p_l = L delta_jl``."""
    if pilot_len < n_bs:
        raise ConfigurationError("pilot_len must be at least n_bs")
    n = np.arange(pilot_len)
    return np.exp(-2j * np.pi * np.outer(np.arange(n_bs), n) / pilot_len)


def _received_blocks(cfg, pilots, blocks, rng):
    """Synthesize the received downlink blocks and their per-BS channels."""
    L = cfg.pilot_len
    h = _cn(rng, (blocks, cfg.n_bs))
    snr = np.sqrt(np.asarray(cfg.snr_dl_per_bs, dtype=float))
    wanted = (h * snr) @ pilots  # (blocks, L)
    h0 = cfg.si.mu + _cn(rng, (blocks, 1))
    s = _cn(rng, (blocks, L))
    noise = _cn(rng, (blocks, L))
    impairment = math.sqrt(cfg.si.inr) * h0 * s + noise
    return h, wanted, impairment


def simulate_pilot_sinr(cfg, target_bs, blocks, rng):
    """Empirical per-symbol SINR after least-squares projection on a pilot.

    Received blocks contain every BS's pilot, residual self-interference
    ``sqrt(inr) * h0 * s`` and unit noise.  The projection onto the
    target's pilot yields ``L * sqrt(snr) * h + p^H (interference + noise)``;
    the returned ratio divides out the processing gain ``L``, so its
    expectation is ``snr / (1 + inr (1 + |mu|^2))``.

    ``target_bs`` is 1-based.
    """
    if not 1 <= target_bs <= cfg.n_bs:
        raise ConfigurationError(f"target_bs must be in 1..{cfg.n_bs}")
    if blocks < 1:
        raise ConfigurationError("blocks must be at least 1")
    pilots = orthogonal_pilots(cfg.n_bs, cfg.pilot_len)
    h, wanted, impairment = _received_blocks(cfg, pilots, blocks, rng)
    p = pilots[target_bs - 1]
    y = wanted + impairment
    z = y @ p.conj()
    L = cfg.pilot_len
    signal = L * math.sqrt(cfg.snr_dl_per_bs[target_bs - 1]) * h[:, target_bs - 1]
    residual = z - signal
    return float(np.sum(np.abs(signal) ** 2) / (L * np.sum(np.abs(residual) ** 2)))


def pilot_leakage(cfg, target_bs, other_bs, blocks, rng):
    """Power of ``other_bs``'s pilot signal in the target's projection,
    relative to the target's own projected signal power."""
    for j in (target_bs, other_bs):
        if not 1 <= j <= cfg.n_bs:
            raise ConfigurationError(f"base station index must be in 1..{cfg.n_bs}")
    pilots = orthogonal_pilots(cfg.n_bs, cfg.pilot_len)
    h = _cn(rng, (blocks, cfg.n_bs))
    other = math.sqrt(cfg.snr_dl_per_bs[other_bs - 1]) * h[:, [other_bs - 1]] * pilots[other_bs - 1]
    own = math.sqrt(cfg.snr_dl_per_bs[target_bs - 1]) * h[:, [target_bs - 1]] * pilots[target_bs - 1]
    p = pilots[target_bs - 1].conj()
    return float(np.sum(np.abs(other @ p) ** 2) / np.sum(np.abs(own @ p) ** 2))


def coherence_time(speed_kmh, carrier_hz, corr_threshold):
    """Smallest lag at which the autocorrelation falls to ``corr_threshold``.

    Returns ``math.inf`` for a static UE.
    """
    if not 0 < corr_threshold < 1:
        raise DomainError("corr_threshold must lie in (0, 1)")
    f_d = doppler_frequency(speed_kmh, carrier_hz)
    if f_d == 0:
        return math.inf
    lo, hi = 0.0, J0_FIRST_ZERO
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bessel_j0(mid) > corr_threshold:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi) / (2.0 * math.pi * f_d)


def coherence_symbol_budget(speed_kmh, carrier_hz, bandwidth_hz, corr_threshold=0.8):
    """Number of symbols at ``bandwidth_hz`` that fit inside the coherence time.

    A static UE never decorrelates and gets ``COHERENCE_CAP``.
    """
    if not bandwidth_hz > 0:
        raise DomainError("bandwidth must be positive")
    t = coherence_time(speed_kmh, carrier_hz, corr_threshold)
    if math.isinf(t):
        return COHERENCE_CAP
    return min(int(math.floor(bandwidth_hz * t)), COHERENCE_CAP)
