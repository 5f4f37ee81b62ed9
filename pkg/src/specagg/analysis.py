"""Closed-form service rates and stability region, plus an enumeration cross-check.

The secondary user is analyzed in its saturated (always-backlogged) form,
which upper-bounds the real system and shares its stability boundary, so
the saturated service rate is also the maximum stable arrival rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .channel import ChannelParams, pu_success_prob, su_success_prob
from .sensing import SensingParams, binomial, decision_probability

__all__ = [
    "TrafficParams",
    "AnalyticalResult",
    "BoundaryPoint",
    "UnstablePrimaryError",
    "primary_service_rate",
    "empty_probability",
    "secondary_service_rate",
    "secondary_service_rate_oracle",
    "stability_region",
    "single_band_service_rate",
    "analyze",
]

# 4**m outcome patterns; past this the exhaustive cross-check is refused.
ORACLE_MAX_BANDS = 12


class UnstablePrimaryError(Exception):
    """Primary arrivals exceed the primary service rate; the empty-band
    probability (and everything built on it) is undefined."""


@dataclass(frozen=True)
class TrafficParams:
    """Bernoulli arrival means, in packets per slot."""

    lambda_p: float
    lambda_s: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_p <= 1.0:
            raise ValueError(f"lambda_p must be in [0, 1], got {self.lambda_p}")
        if not 0.0 <= self.lambda_s <= 1.0:
            raise ValueError(f"lambda_s must be in [0, 1], got {self.lambda_s}")


@dataclass(frozen=True)
class AnalyticalResult:
    """Closed-form rates and stability verdicts for one operating point."""

    mu_p: float
    pi: float
    mu_s: float
    primary_stable: bool
    secondary_stable: bool

    def secondary_stable_at(self, lambda_s: float) -> bool:
        """Whether a secondary arrival rate sits inside the stability region."""
        return lambda_s < self.mu_s


@dataclass(frozen=True)
class BoundaryPoint:
    """One point of the stability-region boundary.

    lambda_s_max is None when the grid value leaves the primary queues
    unstable, in which case the point is reported but carries no boundary.
    """

    lambda_p: float
    lambda_s_max: float | None

    @property
    def skipped(self) -> bool:
        return self.lambda_s_max is None


def primary_service_rate(channel: ChannelParams, sensing: SensingParams) -> float:
    """Mean primary service rate: own-link success times correct detection.

    A busy band is lost only to its own fading or to a secondary
    misdetection (the saturated secondary transmits whenever it declares
    any band idle, so a misdetected band always sees a collision).
    """
    return pu_success_prob(channel) * (1.0 - sensing.p_md)


def empty_probability(mu_p: float, traffic: TrafficParams) -> float:
    """Stationary probability 1 - lambda_p / mu_p that a primary queue is empty."""
    if traffic.lambda_p == 0.0:
        return 1.0  # never loaded, even when mu_p is 0 too
    if traffic.lambda_p > mu_p:
        raise UnstablePrimaryError(
            f"lambda_p = {traffic.lambda_p} exceeds mu_p = {mu_p}"
        )
    return 1.0 - traffic.lambda_p / mu_p


def secondary_service_rate(
    channel: ChannelParams, sensing: SensingParams, traffic: TrafficParams
) -> float:
    """Mean service rate of the saturated secondary user.

    Sums over the number of truly idle bands and, within that, the number
    declared idle: service occurs when at least one idle band is declared
    idle, every busy band is detected, and the aggregate-width channel
    draw succeeds.
    """
    m = channel.m_bands
    pi = empty_probability(primary_service_rate(channel, sensing), traffic)
    total = 0.0
    for eta in range(1, m + 1):
        occupancy = binomial(m, eta) * pi**eta * (1.0 - pi) ** (m - eta)
        inner = 0.0
        for n in range(1, eta + 1):
            inner += decision_probability(eta, n, True, sensing, m) * su_success_prob(
                channel, n
            )
        total += occupancy * inner
    return total


def secondary_service_rate_oracle(
    channel: ChannelParams, sensing: SensingParams, traffic: TrafficParams
) -> float:
    """Saturated secondary service rate by exhaustive outcome enumeration.

    Walks every (band occupancy) x (per-band declaration) pattern, weights
    it band by band, and applies the protocol rules literally: transmit
    over all declared-idle bands if there is at least one; the packet
    survives only if no declared-idle band was actually busy and the
    channel draw at the aggregate width succeeds.  Independent of the
    closed form above, and deliberately kept free of binomial shortcuts.
    """
    m = channel.m_bands
    if m > ORACLE_MAX_BANDS:
        raise ValueError(
            f"enumeration walks 4**m_bands outcomes; m_bands must be "
            f"<= {ORACLE_MAX_BANDS}, got {m}"
        )
    pi = empty_probability(primary_service_rate(channel, sensing), traffic)
    success = [0.0] + [su_success_prob(channel, n) for n in range(1, m + 1)]
    p_fa, p_md = sensing.p_fa, sensing.p_md
    total = 0.0
    for occupancy in range(1 << m):
        for declared in range(1 << m):
            weight = 1.0
            for band in range(m):
                busy = occupancy >> band & 1
                declared_idle = declared >> band & 1
                if busy:
                    weight *= (1.0 - pi) * (p_md if declared_idle else 1.0 - p_md)
                else:
                    weight *= pi * (1.0 - p_fa if declared_idle else p_fa)
            if declared == 0:
                continue  # nothing declared idle: the secondary stays silent
            if declared & occupancy:
                continue  # it transmitted into an active band: both packets die
            total += weight * success[declared.bit_count()]
    return total


def stability_region(
    channel: ChannelParams, sensing: SensingParams, lambda_p_grid: Iterable[float]
) -> list[BoundaryPoint]:
    """Boundary of the arrival-rate region keeping every queue stable.

    For each primary arrival rate on the grid, the maximum stable
    secondary arrival rate.  Grid values at or above the primary service
    rate are reported as skipped points rather than failing the sweep.
    """
    mu_p = primary_service_rate(channel, sensing)
    points = []
    for lam_p in lambda_p_grid:
        if lam_p >= mu_p:
            points.append(BoundaryPoint(lam_p, None))
            continue
        traffic = TrafficParams(lambda_p=lam_p, lambda_s=0.0)
        points.append(
            BoundaryPoint(lam_p, secondary_service_rate(channel, sensing, traffic))
        )
    return points


def single_band_service_rate(
    channel: ChannelParams, sensing: SensingParams, traffic: TrafficParams
) -> float:
    """Service rate of the baseline that picks a single sensed-free band.

    The secondary transmits on one declared-idle band (any one: bands are
    statistically identical) with its full slot power concentrated there,
    so PSD and LIMITED modes coincide.  Service needs every busy band
    detected and at least one idle band declared idle.
    """
    m = channel.m_bands
    pi = empty_probability(primary_service_rate(channel, sensing), traffic)
    one_band = su_success_prob(channel, 1)  # width 1: both power modes agree
    total = 0.0
    for eta in range(1, m + 1):
        occupancy = binomial(m, eta) * pi**eta * (1.0 - pi) ** (m - eta)
        detect_all = (1.0 - sensing.p_md) ** (m - eta)
        some_declared = 1.0 - sensing.p_fa**eta
        total += occupancy * detect_all * some_declared * one_band
    return total


def analyze(
    channel: ChannelParams, sensing: SensingParams, traffic: TrafficParams
) -> AnalyticalResult:
    """Evaluate all closed forms for one operating point."""
    mu_p = primary_service_rate(channel, sensing)
    pi = empty_probability(mu_p, traffic)
    mu_s = secondary_service_rate(channel, sensing, traffic)
    return AnalyticalResult(
        mu_p=mu_p,
        pi=pi,
        mu_s=mu_s,
        primary_stable=traffic.lambda_p < mu_p,
        secondary_stable=traffic.lambda_s < mu_s,
    )
