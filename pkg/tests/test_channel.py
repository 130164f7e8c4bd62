import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdcsi.channel import (
    COHERENCE_CAP,
    EstimationModel,
    FadingParams,
    PilotSimConfig,
    SelfInterferenceParams,
    autocorrelation,
    coherence_symbol_budget,
    coherence_time,
    doppler_frequency,
    estimation_variance,
    normalized_correlation,
    orthogonal_pilots,
    pilot_leakage,
    sample_joint_complex,
    sample_joint_pair,
    simulate_pilot_sinr,
)
from fdcsi.errors import ConfigurationError, DomainError
from fdcsi.montecarlo import stream

from oracles import bisect, j0_series

# Frozen from the oracles (see test_oracle_values_frozen).
FD_15 = 27.79700793317934
FD_50 = 92.6566931105978
RHO_15_2MS = 0.9697279025224012
RHO_50_4MS = 0.04011173040526452
COHERENCE_50KMH_S = 1.5775e-3


def test_oracle_values_frozen():
    assert 15 / 3.6 * 2e9 / 299_792_458 == pytest.approx(FD_15, rel=1e-15)
    assert j0_series(2 * math.pi * FD_15 * 0.002) == pytest.approx(RHO_15_2MS, abs=1e-15)
    assert j0_series(2 * math.pi * FD_50 * 0.004) == pytest.approx(RHO_50_4MS, abs=1e-15)
    x = bisect(lambda t: j0_series(t) - 0.8, 0.0, 2.0, 1e-13)
    assert x / (2 * math.pi * FD_50) == pytest.approx(COHERENCE_50KMH_S, abs=5e-8)


# -- Doppler and autocorrelation ---------------------------------------------


@pytest.mark.parametrize("speed,expected", [(0, 0.0), (15, 27.796), (50, 92.656)])  # 3-decimal hand values
def test_doppler_examples(speed, expected):
    assert doppler_frequency(speed, 2e9) == pytest.approx(expected, abs=2e-3)


def test_doppler_rejects_negative_speed():
    with pytest.raises(DomainError):
        doppler_frequency(-1, 2e9)


def test_autocorrelation_zero_delay():
    assert autocorrelation(123.4, 0.0) == 1.0


@pytest.mark.parametrize(
    "f_d,delay,expected",
    # series oracle at exactly these inputs
    [(27.796, 0.002, 0.9697300810904188), (92.656, 0.004, 0.04012104267997734)],
)
def test_autocorrelation_examples(f_d, delay, expected):
    assert autocorrelation(f_d, delay) == pytest.approx(expected, abs=1e-10)


def test_fading_params_rho_tilde():
    assert FadingParams(2e9, 15, 0.002).rho_tilde == pytest.approx(RHO_15_2MS, abs=1e-12)
    assert FadingParams(2e9, 50, 0.004).rho_tilde == pytest.approx(RHO_50_4MS, abs=1e-12)


@given(st.floats(0, 500), st.floats(0, 0.1))
def test_autocorrelation_bounded(f_d, delay):
    assert abs(autocorrelation(f_d, delay)) <= 1.0


# -- estimation model --------------------------------------------------------


@pytest.mark.parametrize("sinr,expected", [(math.inf, 0.0), (10, 0.00544), (0.313, 0.17380)])
def test_estimation_variance(sinr, expected):
    assert estimation_variance(EstimationModel(0.0544, sinr)) == pytest.approx(expected, abs=5e-6)


@pytest.mark.parametrize("sinr", [0.0, -1.0])
def test_estimation_variance_rejects_nonpositive_sinr(sinr):
    with pytest.raises(DomainError):
        EstimationModel(0.0544, sinr)


@pytest.mark.parametrize(
    "rho_tilde,se2,expected", [(1.0, 0.0, 1.0), (0.9696, 0.00544, 0.96697), (0.0, 3.0, 0.0)]
)
def test_normalized_correlation(rho_tilde, se2, expected):
    assert normalized_correlation(rho_tilde, se2) == pytest.approx(expected, abs=5e-6)


@given(st.floats(0.01, 1.0), st.floats(0, 10), st.floats(1e-3, 10))
def test_normalized_correlation_decreasing(rho_tilde, se2, step):
    assert normalized_correlation(rho_tilde, se2 + step) < normalized_correlation(rho_tilde, se2)


# -- joint sampler -----------------------------------------------------------

N = 1_000_000


@pytest.fixture(scope="module")
def joint_draws():
    return sample_joint_pair(0.9, 0.17, stream(11), N)


def test_sampler_means(joint_draws):
    g_hat, g_next = joint_draws
    # exponential: std equals mean
    assert abs(g_hat.mean() - 1.17) <= 3 * 1.17 / math.sqrt(N)
    assert abs(g_next.mean() - 1.0) <= 3 / math.sqrt(N)


def test_sampler_complex_correlation():
    h_hat, h_next = sample_joint_complex(0.9, 0.0, stream(12), N)
    r = np.vdot(h_hat, h_next).real / math.sqrt(np.vdot(h_hat, h_hat).real * np.vdot(h_next, h_next).real)
    # conservative large-sample standard error of a sample correlation
    se = (1 - 0.9**2) / math.sqrt(N)
    assert abs(r - 0.9) <= 3 * se


def test_sampler_marginal_is_exponential():
    _, g_next = sample_joint_pair(0.5, 0.1, stream(13), 100_000)
    x = np.sort(g_next)
    n = x.size
    cdf = 1.0 - np.exp(-x)
    d = max(np.max(np.arange(1, n + 1) / n - cdf), np.max(cdf - np.arange(n) / n))
    assert d < 1.628 / math.sqrt(n)  # 1% critical value


def test_sampler_scalar_draw():
    s = sample_joint_pair(0.5, 0.0, stream(0))
    assert s.gamma_hat >= 0 and s.gamma_next >= 0


def test_sampler_deterministic():
    a = sample_joint_pair(0.5, 0.1, stream(5), 1000)
    b = sample_joint_pair(0.5, 0.1, stream(5), 1000)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_sampler_domain():
    with pytest.raises(DomainError):
        sample_joint_pair(1.5, 0.0, stream(0), 10)


# -- pilot simulation --------------------------------------------------------

SNR_5DB = 3.1623


def _pilot_cfg(inr, n_bs=1, pilot_len=16):
    return PilotSimConfig(n_bs, pilot_len, (SNR_5DB,) * n_bs, SelfInterferenceParams(inr))


@pytest.mark.parametrize("inr", [0.0, 1.0, 10.0])
def test_pilot_sinr_matches_closed_form(inr):
    sinr = simulate_pilot_sinr(_pilot_cfg(inr), 1, 100_000, stream(21, int(inr)))
    assert sinr == pytest.approx(SNR_5DB / (1 + inr), rel=0.05)


def test_pilot_sinr_two_bs():
    cfg = _pilot_cfg(1.0, n_bs=2, pilot_len=4)
    sinr = simulate_pilot_sinr(cfg, 2, 100_000, stream(22))
    assert sinr == pytest.approx(SNR_5DB / 2, rel=0.05)


def test_pilot_leakage_is_zero():
    cfg = _pilot_cfg(0.0, n_bs=2, pilot_len=8)
    assert pilot_leakage(cfg, 1, 2, 1000, stream(23)) < 1e-25


def test_pilots_orthogonal():
    p = orthogonal_pilots(3, 5)
    gram = p.conj() @ p.T
    assert np.allclose(gram, 5 * np.eye(3), atol=1e-12)


def test_pilot_configuration_errors():
    with pytest.raises(ConfigurationError):
        _pilot_cfg(0.0, n_bs=3, pilot_len=2)
    with pytest.raises(ConfigurationError):
        simulate_pilot_sinr(_pilot_cfg(0.0), 2, 10, stream(0))


# -- coherence budget ---------------------------------------------------------


def test_coherence_time():
    assert coherence_time(50, 2e9, 0.8) == pytest.approx(COHERENCE_50KMH_S, abs=5e-8)


def test_coherence_budget():
    n = coherence_symbol_budget(50, 2e9, 1e5, 0.8)
    assert n > 150
    assert abs(n - 156) <= 1


def test_coherence_budget_static_cap():
    assert coherence_symbol_budget(0, 2e9, 1e5, 0.8) == COHERENCE_CAP


@pytest.mark.parametrize("thr", [0.0, 1.0, -0.2, 1.5])
def test_coherence_threshold_domain(thr):
    with pytest.raises(DomainError):
        coherence_symbol_budget(50, 2e9, 1e5, thr)


@settings(max_examples=30)
@given(st.floats(1, 300), st.floats(0.05, 0.95))
def test_coherence_time_hits_threshold(speed, thr):
    t = coherence_time(speed, 2e9, thr)
    assert autocorrelation(doppler_frequency(speed, 2e9), t) == pytest.approx(thr, abs=1e-9)
