"""Physical-layer model for a secondary user that aggregates idle primary bands.

Everything is expressed in dimensionless ratios: mean link SNRs per Hz
(snr_p, snr_s), the per-band sensing time as a fraction of the slot
(tau_b_frac), and the nominal spectral efficiency in bits/s/Hz
(spectral_eff_r).  Per-slot packet success over a Rayleigh block-fading
link with mean SNR g and target spectral efficiency r is
exp(-(2**r - 1) / g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "PowerMode",
    "ChannelParams",
    "sensing_fraction",
    "pu_success_prob",
    "su_effective_rate",
    "su_success_prob",
]

# 2.0 ** r overflows float64 at r >= 1024; the success probability has long
# since underflowed to zero by then.
_MAX_FINITE_RATE = 1024.0


class PowerMode(Enum):
    """How the secondary spends transmit power over the aggregated bandwidth.

    PSD: constant power spectral density, so total power grows with the
    number of aggregated bands.  LIMITED: fixed total power spread evenly
    over the aggregate.
    """

    PSD = "PSD"
    LIMITED = "LIMITED"


@dataclass(frozen=True)
class ChannelParams:
    """Link and framing parameters for one operating point.

    Exactly one of snr_p / p_bar_p must be given: either the primary link
    SNR from which the primary success probability is derived, or that
    probability directly.
    """

    snr_s: float
    spectral_eff_r: float
    tau_b_frac: float
    m_bands: int
    k_antennas: int
    snr_p: float | None = None
    p_bar_p: float | None = None
    power_mode: PowerMode = PowerMode.PSD

    def __post_init__(self) -> None:
        if (self.snr_p is None) == (self.p_bar_p is None):
            raise ValueError("exactly one of snr_p / p_bar_p must be supplied")
        if self.snr_p is not None and self.snr_p <= 0:
            raise ValueError(f"snr_p must be > 0, got {self.snr_p}")
        if self.p_bar_p is not None and not 0.0 <= self.p_bar_p <= 1.0:
            raise ValueError(f"p_bar_p must be in [0, 1], got {self.p_bar_p}")
        if self.snr_s <= 0:
            raise ValueError(f"snr_s must be > 0, got {self.snr_s}")
        if self.spectral_eff_r <= 0:
            raise ValueError(f"spectral_eff_r must be > 0, got {self.spectral_eff_r}")
        if not 0.0 <= self.tau_b_frac <= 1.0:
            raise ValueError(f"tau_b_frac must be in [0, 1], got {self.tau_b_frac}")
        if self.m_bands < 1:
            raise ValueError(f"m_bands must be >= 1, got {self.m_bands}")
        if self.k_antennas < 1:
            raise ValueError(f"k_antennas must be >= 1, got {self.k_antennas}")


def sensing_fraction(params: ChannelParams) -> float:
    """Fraction of the slot spent sensing: ceil(m_bands / k_antennas) * tau_b_frac.

    With more antennas than bands the ceiling is 1 and a single per-band
    sensing period covers everything.
    """
    passes = -(-params.m_bands // params.k_antennas)
    return passes * params.tau_b_frac


def pu_success_prob(params: ChannelParams) -> float:
    """Per-slot success probability of a primary packet on its own link."""
    if params.p_bar_p is not None:
        return params.p_bar_p
    return math.exp(-(2.0 ** params.spectral_eff_r - 1.0) / params.snr_p)


def _check_eta(params: ChannelParams, eta: int) -> None:
    if not 1 <= eta <= params.m_bands:
        raise ValueError(f"eta must be in [1, {params.m_bands}], got {eta}")


def su_effective_rate(params: ChannelParams, eta: int) -> float:
    """Spectral efficiency the secondary must sustain over eta aggregated bands.

    The packet has to fit in the slot time left after sensing; if sensing
    consumes the whole slot the required rate is math.inf.
    """
    _check_eta(params, eta)
    available = 1.0 - sensing_fraction(params)
    if available <= 0.0:
        return math.inf
    return params.spectral_eff_r / (eta * available)


def su_success_prob(params: ChannelParams, eta: int) -> float:
    """Per-slot success probability of a secondary packet over eta clean bands.

    Exactly 0.0 when sensing consumes the whole slot.  In LIMITED mode the
    fixed total power is spread over the aggregate, scaling the outage
    exponent by eta.
    """
    rate = su_effective_rate(params, eta)
    if rate >= _MAX_FINITE_RATE:
        return 0.0
    exponent = (2.0 ** rate - 1.0) / params.snr_s
    if params.power_mode is PowerMode.LIMITED:
        exponent *= eta
    return math.exp(-exponent)
