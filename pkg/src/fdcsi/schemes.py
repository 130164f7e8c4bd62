"""Throughput of the four CSIT acquisition schemes at a 1 MHz reference.

All SNRs in :class:`LinkBudget` are referred to 1 MHz.  Shrinking a band by
``kappa`` divides its noise power, so SNRs scale by ``1 / kappa`` while the
self-interference-to-noise ratio is unchanged.
"""

import enum
import math
from dataclasses import dataclass, replace

from .channel import autocorrelation, doppler_frequency
from .errors import DomainError
from .metrics import (
    DEFAULT_ABS_TOL,
    LinkStatistics,
    RateAdaptParams,
    average_effective_rate,
    outage_probability,
)
from .units import db_to_linear

REFERENCE_BANDWIDTH_MHZ = 1.0


class SchemeTag(enum.Enum):
    PCSI = "PCSI"
    PROBE = "PROBE"
    FDCSI = "FDCSI"
    FDDATA = "FDDATA"


@dataclass(frozen=True)
class LinkBudget:
    snr_ul: float
    snr_dl: float
    inr: float
    kappa: float
    t_min_s: float
    t_pr_s: float
    c_e: float = 0.0544

    def __post_init__(self):
        if not (self.snr_ul > 0 and self.snr_dl > 0):
            raise DomainError("SNRs must be positive")
        if self.inr < 0:
            raise DomainError("inr must be non-negative")
        if not 0 < self.kappa <= 1:
            raise DomainError("kappa must lie in (0, 1]")
        if not 0 < self.t_min_s <= self.t_pr_s:
            raise DomainError("need 0 < t_min_s <= t_pr_s")
        if not self.c_e > 0:
            raise DomainError("c_e must be positive")


@dataclass(frozen=True)
class ThroughputReport:
    scheme: SchemeTag
    throughput_mnats_per_s: float
    pout: float
    # FDDATA only: uplink_mnats, downlink_mnats, uplink_pout, downlink_pout
    components: dict = None


def scale_snr(snr_1mhz, kappa):
    """SNR in a band of ``kappa`` MHz given its value at 1 MHz."""
    if not 0 < kappa <= 1:
        raise DomainError("kappa must lie in (0, 1]")
    return snr_1mhz / kappa


def scale_to_bandwidth(snr_1mhz, inr, kappa):
    """Return ``(snr, inr)`` for a band of ``kappa`` MHz; INR is flat."""
    return scale_snr(snr_1mhz, kappa), inr


def downlink_sinr(budget, kappa=None):
    """Downlink SINR in a ``kappa`` MHz band after residual self-interference."""
    k = budget.kappa if kappa is None else kappa
    return scale_snr(budget.snr_dl, k) / (budget.inr + 1.0)


def scheme_sinr_csi(tag, budget, leg="uplink"):
    """SINR seen by the channel estimator; ``math.inf`` for perfect CSI.

    ``leg`` selects the uplink or downlink half of FDDATA and is ignored
    for the other schemes.
    """
    tag = SchemeTag(tag)
    if tag is SchemeTag.PCSI:
        return math.inf
    if tag is SchemeTag.PROBE:
        return budget.snr_ul
    if tag is SchemeTag.FDCSI:
        return downlink_sinr(budget)
    if leg == "uplink":
        return budget.snr_ul
    if leg == "downlink":
        return downlink_sinr(budget)
    raise DomainError(f"unknown leg {leg!r}")


def csi_delay(tag, budget):
    tag = SchemeTag(tag)
    if tag is SchemeTag.PCSI:
        return 0.0
    if tag is SchemeTag.FDCSI:
        return budget.t_min_s
    return budget.t_pr_s


def link_statistics(tag, budget, fading, leg="uplink"):
    rho_tilde = autocorrelation(
        doppler_frequency(fading.speed_kmh, fading.carrier_hz), csi_delay(tag, budget)
    )
    sinr = scheme_sinr_csi(tag, budget, leg)
    sigma_e_sq = 0.0 if math.isinf(sinr) else budget.c_e / sinr
    return LinkStatistics(rho_tilde, sigma_e_sq)


@dataclass(frozen=True)
class Leg:
    """One link of a scheme: bandwidth in MHz, rate rule and statistics."""

    name: str
    bandwidth_mhz: float
    params: RateAdaptParams
    stats: LinkStatistics


def scheme_legs(tag, budget, fading, delta_db, gamma_gap_db):
    """Links whose throughputs add up to the scheme's total.

    Every scheme has an uplink at the 1 MHz reference.  FDDATA adds a
    downlink of ``kappa`` MHz whose data SNR is the downlink SINR; both of
    its legs acquire CSI by probing.
    """
    tag = SchemeTag(tag)
    delta = db_to_linear(delta_db)
    gap = db_to_linear(gamma_gap_db)
    legs = [
        Leg(
            "uplink",
            REFERENCE_BANDWIDTH_MHZ,
            RateAdaptParams(budget.snr_ul, delta, gap),
            link_statistics(tag, budget, fading),
        )
    ]
    if tag is SchemeTag.FDDATA:
        legs.append(
            Leg(
                "downlink",
                budget.kappa,
                RateAdaptParams(downlink_sinr(budget), delta, gap),
                link_statistics(tag, budget, fading, leg="downlink"),
            )
        )
    return legs


def scheme_throughput(tag, budget, fading, delta_db, gamma_gap_db, tol=DEFAULT_ABS_TOL):
    """Throughput in Mnats/s at the 1 MHz reference, with analytic outage.

    PCSI reports zero outage by definition.  FDDATA reports its uplink
    outage and keeps both legs in ``components``.
    """
    tag = SchemeTag(tag)
    legs = scheme_legs(tag, budget, fading, delta_db, gamma_gap_db)
    parts = {}
    for leg in legs:
        parts[f"{leg.name}_mnats"] = leg.bandwidth_mhz * average_effective_rate(leg.params, leg.stats, tol)
        parts[f"{leg.name}_pout"] = outage_probability(leg.stats, leg.params.delta)
    total = math.fsum(parts[f"{leg.name}_mnats"] for leg in legs)
    pout = 0.0 if tag is SchemeTag.PCSI else parts["uplink_pout"]
    components = parts if tag is SchemeTag.FDDATA else None
    return ThroughputReport(tag, total, pout, components)


def parse_scheme(label):
    """Split a label like ``"FDDATA@0.2"`` into ``(SchemeTag, kappa or None)``."""
    name, _, kappa = label.partition("@")
    try:
        tag = SchemeTag(name.upper())
    except ValueError:
        raise DomainError(f"unknown scheme {name!r}") from None
    if not kappa:
        return tag, None
    try:
        k = float(kappa)
    except ValueError:
        raise DomainError(f"bad bandwidth fraction in {label!r}") from None
    if not 0 < k <= 1:
        raise DomainError(f"kappa must lie in (0, 1] in {label!r}")
    return tag, k


def budget_for(label, budget):
    """The budget to use for a scheme label, applying its ``@kappa`` override."""
    tag, kappa = parse_scheme(label)
    if kappa is not None:
        budget = replace(budget, kappa=kappa)
    return tag, budget
