"""Slotted Monte Carlo simulation of the band-aggregation protocol.

Per slot: backlogged primaries transmit on their own bands; the secondary
senses every band and, when it has (or fakes) a packet, transmits one
packet over the aggregate of all bands it declared idle.  Any band carrying
two transmissions kills both packets.  Channel outcomes are drawn as
Bernoulli trials with the closed-form success probabilities (per-slot
distribution is identical to sampling fading coefficients).  Departures are
applied before arrivals, so a packet arriving in a slot cannot be served in
that slot.

Randomness discipline: one value is consumed from every stream on every
slot, whether or not it ends up used, so runs sharing a seed see identical
arrival/channel/sensing realizations in DOMINANT and ORIGINAL modes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .analysis import analyze
from .channel import ChannelParams, pu_success_prob, su_success_prob
from .config import ScenarioConfig

__all__ = [
    "Mode",
    "Verdict",
    "SimConfig",
    "QueueState",
    "SlotOutcome",
    "SimReport",
    "BoundaryRun",
    "BoundaryCheck",
    "ProtocolStreams",
    "step",
    "run",
    "boundary_check",
]

BATCH_COUNT = 100


class Mode(Enum):
    """DOMINANT: the secondary sends dummy packets when its queue is empty
    (saturated upper bound).  ORIGINAL: it stays silent when empty."""

    DOMINANT = "DOMINANT"
    ORIGINAL = "ORIGINAL"


class Verdict(Enum):
    STABLE = "STABLE"
    UNSTABLE = "UNSTABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: scenario, mode, horizon, seed, warmup.

    warmup slots are excluded from the report statistics; None means 10%
    of the horizon.  The least-squares drift of the secondary backlog is
    compared against the two slope thresholds (packets/slot) to call the
    stability verdict.
    """

    scenario: ScenarioConfig
    mode: Mode
    slots: int
    seed: int
    warmup: int | None = None
    unstable_slope: float = 0.01
    stable_slope: float = 0.001

    def __post_init__(self) -> None:
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.warmup is None:
            object.__setattr__(self, "warmup", self.slots // 10)
        if not 0 <= self.warmup < self.slots:
            raise ValueError(
                f"need slots > warmup >= 0, got slots={self.slots}, warmup={self.warmup}"
            )


@dataclass
class QueueState:
    """Backlogs at a slot boundary: one queue per primary plus the secondary."""

    primary: list[int]
    secondary: int


@dataclass(frozen=True, slots=True)
class SlotOutcome:
    """Everything that happened in one slot; band sets are bitmasks."""

    slot: int
    occupancy: int
    declared_idle: int
    su_transmitted: bool
    su_success: bool
    su_departure: bool
    pu_departures: int
    collision: bool
    primary_arrivals: int
    secondary_arrival: bool


@dataclass(frozen=True)
class SimReport:
    """Post-warmup statistics of one run (totals cover the full horizon)."""

    mode: Mode
    slots: int
    warmup: int
    seed: int
    empirical_mu_p: float
    empirical_mu_s: float
    throughput_s: float
    mean_queue_p: float
    mean_queue_s: float
    stability_verdict_s: Verdict
    collisions: int
    std_err_mu_s: float
    arrivals_s: int
    departures_s: int
    final_queue_s: int

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode.value,
            "slots": self.slots,
            "warmup": self.warmup,
            "seed": self.seed,
            "empirical_mu_p": self.empirical_mu_p,
            "empirical_mu_s": self.empirical_mu_s,
            "throughput_s": self.throughput_s,
            "mean_queue_p": self.mean_queue_p,
            "mean_queue_s": self.mean_queue_s,
            "stability_verdict_s": self.stability_verdict_s.value,
            "collisions": self.collisions,
            "std_err_mu_s": self.std_err_mu_s,
            "arrivals_s": self.arrivals_s,
            "departures_s": self.departures_s,
            "final_queue_s": self.final_queue_s,
        }
        return out


def _pack_slot_masks(bits: np.ndarray) -> list[int]:
    """Fold a (bands, slots) boolean matrix into one bitmask int per slot."""
    masks: list[int] | None = None
    for lo in range(0, bits.shape[0], 32):
        chunk = bits[lo : lo + 32]
        weights = np.left_shift(1, np.arange(chunk.shape[0], dtype=np.int64))
        words = (chunk * weights[:, None]).sum(axis=0).tolist()
        if masks is None:
            masks = words
        else:
            masks = [m | (w << lo) for m, w in zip(masks, words)]
    return masks if masks is not None else []


class ProtocolStreams:
    """Deterministic named sub-streams with a fixed per-slot draw layout.

    One arrival stream per queue, one channel stream per link, one sensing
    stream per band, all spawned from a single 64-bit-or-wider seed.  Each
    call to next_slot consumes exactly one value from every stream and
    returns the slot's draws as
    (sense_if_busy, sense_if_idle, pu_channel_ok, su_uniform,
     primary_arrivals, secondary_arrival)
    where the first three and primary_arrivals are band bitmasks.
    """

    _CHUNK = 1 << 15

    def __init__(self, scenario: ScenarioConfig, seed: int):
        channel = scenario.channel
        m = channel.m_bands
        arrivals_ss, channels_ss, sensing_ss = np.random.SeedSequence(seed).spawn(3)
        pcg = np.random.PCG64
        self._arrival_gens = [
            np.random.Generator(pcg(s)) for s in arrivals_ss.spawn(m + 1)
        ]
        self._channel_gens = [
            np.random.Generator(pcg(s)) for s in channels_ss.spawn(m + 1)
        ]
        self._sensing_gens = [
            np.random.Generator(pcg(s)) for s in sensing_ss.spawn(m)
        ]
        self._m = m
        self._p_bar_p = pu_success_prob(channel)
        self._p_md = scenario.sensing.p_md
        self._p_fa = scenario.sensing.p_fa
        self._lambda_p = scenario.traffic.lambda_p
        self._lambda_s = scenario.traffic.lambda_s
        self.consumed = 0
        self._pos = 0
        self._size = 0

    def _refill(self) -> None:
        n = self._CHUNK
        m = self._m
        sense_busy = np.empty((m, n), dtype=bool)
        sense_idle = np.empty((m, n), dtype=bool)
        for b, gen in enumerate(self._sensing_gens):
            u = gen.random(n)
            sense_busy[b] = u < self._p_md
            sense_idle[b] = u < 1.0 - self._p_fa
        self._sense_busy = _pack_slot_masks(sense_busy)
        self._sense_idle = _pack_slot_masks(sense_idle)

        pu_ok = np.empty((m, n), dtype=bool)
        for b in range(m):
            pu_ok[b] = self._channel_gens[b].random(n) < self._p_bar_p
        self._pu_ok = _pack_slot_masks(pu_ok)
        self._su_u = self._channel_gens[m].random(n).tolist()

        arrivals = np.empty((m, n), dtype=bool)
        for b in range(m):
            arrivals[b] = self._arrival_gens[b].random(n) < self._lambda_p
        self._arr_p = _pack_slot_masks(arrivals)
        self._arr_s = (self._arrival_gens[m].random(n) < self._lambda_s).tolist()
        self._pos = 0
        self._size = n

    def next_slot(self) -> tuple[int, int, int, float, int, bool]:
        if self._pos >= self._size:
            self._refill()
        i = self._pos
        self._pos = i + 1
        self.consumed += 1
        return (
            self._sense_busy[i],
            self._sense_idle[i],
            self._pu_ok[i],
            self._su_u[i],
            self._arr_p[i],
            self._arr_s[i],
        )


@lru_cache(maxsize=64)
def _success_by_width(channel: ChannelParams) -> tuple[float, ...]:
    """Secondary success probability indexed by aggregate width (index 0 unused)."""
    return (0.0,) + tuple(
        su_success_prob(channel, n) for n in range(1, channel.m_bands + 1)
    )


def _slot_core(qp, qs, occupancy, full, draws, dominant, success_by_width):
    """Advance one slot; mutates the primary backlog list in place.

    Returns (qs, occupancy, declared, su_tx, collision, su_success,
    su_departure, pu_departures) for the slot just executed, with
    occupancy/qs already at their next-slot-start values.
    """
    sense_busy, sense_idle, pu_ok, su_u, arr_p, arr_s = draws
    declared = (sense_busy & occupancy) | (sense_idle & ~occupancy & full)
    su_tx = declared != 0 and (dominant or qs > 0)
    collision = False
    su_success = False
    if su_tx:
        if declared & occupancy:
            collision = True
        elif su_u < success_by_width[declared.bit_count()]:
            su_success = True
        pu_dep = occupancy & pu_ok & ~declared
    else:
        pu_dep = occupancy & pu_ok
    su_departure = su_success and qs > 0
    if su_departure:
        qs -= 1
    w = pu_dep
    while w:
        low = w & -w
        band = low.bit_length() - 1
        q = qp[band] - 1
        qp[band] = q
        if q == 0:
            occupancy ^= low
        w ^= low
    w = arr_p
    while w:
        low = w & -w
        qp[low.bit_length() - 1] += 1
        occupancy |= low
        w ^= low
    if arr_s:
        qs += 1
    return qs, occupancy, declared, su_tx, collision, su_success, su_departure, pu_dep


def step(
    state: QueueState, cfg: SimConfig, streams: ProtocolStreams
) -> tuple[QueueState, SlotOutcome]:
    """Execute one slot from the given state, consuming one slot of draws."""
    m = cfg.scenario.channel.m_bands
    qp = list(state.primary)
    qs = state.secondary
    occupancy = 0
    for band in range(m):
        if qp[band] > 0:
            occupancy |= 1 << band
    draws = streams.next_slot()
    slot = streams.consumed - 1
    qs, _, declared, su_tx, collision, su_success, su_departure, pu_dep = _slot_core(
        qp,
        qs,
        occupancy,
        (1 << m) - 1,
        draws,
        cfg.mode is Mode.DOMINANT,
        _success_by_width(cfg.scenario.channel),
    )
    outcome = SlotOutcome(
        slot=slot,
        occupancy=occupancy,
        declared_idle=declared,
        su_transmitted=su_tx,
        su_success=su_success,
        su_departure=su_departure,
        pu_departures=pu_dep,
        collision=collision,
        primary_arrivals=draws[4],
        secondary_arrival=bool(draws[5]),
    )
    return QueueState(primary=qp, secondary=qs), outcome


def _least_squares_slope(y: np.ndarray) -> float:
    """Drift of a backlog trace in packets/slot."""
    n = len(y)
    x = np.arange(n, dtype=np.float64) - (n - 1) / 2.0
    return float((x * (y - y.mean())).sum() / (x * x).sum())


def _batch_means_stderr(indicator: np.ndarray) -> float:
    """Standard error of a rate estimate via batch means over BATCH_COUNT batches."""
    batch = len(indicator) // BATCH_COUNT
    if batch < 1:
        return math.nan
    means = (
        indicator[: batch * BATCH_COUNT]
        .reshape(BATCH_COUNT, batch)
        .mean(axis=1)
    )
    return float(means.std(ddof=1) / math.sqrt(BATCH_COUNT))


def _trace_line(outcome_fields: tuple) -> str:
    slot, occ, declared, su_tx, su_success, su_dep, pu_dep, collision, arr_p, arr_s = (
        outcome_fields
    )
    return json.dumps(
        {
            "slot": slot,
            "occupancy": occ,
            "declared_idle": declared,
            "su_transmitted": su_tx,
            "su_success": su_success,
            "su_departure": su_dep,
            "pu_departures": pu_dep,
            "collision": collision,
            "primary_arrivals": arr_p,
            "secondary_arrival": arr_s,
        },
        separators=(",", ":"),
    )


def run(cfg: SimConfig, trace_path: str | Path | None = None) -> SimReport:
    """Simulate the configured horizon from empty queues and report statistics.

    Identical (cfg, seed) pairs produce identical reports.  When trace_path
    is given, every slot is appended to it as one JSON object per line.
    """
    scenario = cfg.scenario
    m = scenario.channel.m_bands
    success_by_width = _success_by_width(scenario.channel)
    streams = ProtocolStreams(scenario, cfg.seed)
    dominant = cfg.mode is Mode.DOMINANT
    warmup = cfg.warmup
    measured = cfg.slots - warmup
    full = (1 << m) - 1

    qp = [0] * m
    qs = 0
    occupancy = 0
    total_qp = 0

    qs_trace = np.zeros(measured, dtype=np.int64)
    opportunity_success = np.zeros(measured, dtype=np.uint8)
    n_opportunities = 0
    nonempty = [0] * m
    departures = [0] * m
    sum_qp = 0
    collisions = 0
    su_departures = 0
    arrivals_s_total = 0
    departures_s_total = 0

    trace_file = open(trace_path, "w") if trace_path is not None else None
    try:
        for t in range(cfg.slots):
            draws = streams.next_slot()
            occ_start = occupancy
            qs_start = qs
            in_window = t >= warmup
            if in_window:
                qs_trace[t - warmup] = qs
                sum_qp += total_qp
            (
                qs,
                occupancy,
                declared,
                su_tx,
                collision,
                su_success,
                su_departure,
                pu_dep,
            ) = _slot_core(qp, qs, occupancy, full, draws, dominant, success_by_width)
            arrivals_s_total += draws[5]
            departures_s_total += su_departure
            total_qp += draws[4].bit_count() - pu_dep.bit_count()
            if in_window:
                if collision:
                    collisions += 1
                if su_departure:
                    su_departures += 1
                if dominant or qs_start > 0:
                    opportunity_success[n_opportunities] = su_success
                    n_opportunities += 1
                w = occ_start
                while w:
                    low = w & -w
                    nonempty[low.bit_length() - 1] += 1
                    w ^= low
                w = pu_dep
                while w:
                    low = w & -w
                    departures[low.bit_length() - 1] += 1
                    w ^= low
            if trace_file is not None:
                trace_file.write(
                    _trace_line(
                        (
                            t,
                            occ_start,
                            declared,
                            su_tx,
                            su_success,
                            su_departure,
                            pu_dep,
                            collision,
                            draws[4],
                            bool(draws[5]),
                        )
                    )
                    + "\n"
                )
    finally:
        if trace_file is not None:
            trace_file.close()

    ratios = [departures[b] / nonempty[b] for b in range(m) if nonempty[b] > 0]
    empirical_mu_p = sum(ratios) / len(ratios) if ratios else 0.0
    successes = opportunity_success[:n_opportunities]
    empirical_mu_s = float(successes.mean()) if n_opportunities else 0.0

    if measured >= 2:
        slope = _least_squares_slope(qs_trace)
        if slope > cfg.unstable_slope:
            verdict = Verdict.UNSTABLE
        elif slope < cfg.stable_slope:
            verdict = Verdict.STABLE
        else:
            verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.INCONCLUSIVE

    return SimReport(
        mode=cfg.mode,
        slots=cfg.slots,
        warmup=warmup,
        seed=cfg.seed,
        empirical_mu_p=empirical_mu_p,
        empirical_mu_s=empirical_mu_s,
        throughput_s=su_departures / measured,
        mean_queue_p=sum_qp / (measured * m),
        mean_queue_s=float(qs_trace.mean()),
        stability_verdict_s=verdict,
        collisions=collisions,
        std_err_mu_s=_batch_means_stderr(successes),
        arrivals_s=arrivals_s_total,
        departures_s=departures_s_total,
        final_queue_s=qs,
    )


@dataclass(frozen=True)
class BoundaryRun:
    """One coupled-seed pair of runs near the stability boundary."""

    seed: int
    verdict_dominant: Verdict
    verdict_original: Verdict
    throughput_gap: float


@dataclass(frozen=True)
class BoundaryCheck:
    """Coupled-seed comparison of both modes against the analytical boundary.

    throughput_gap in each run is |throughput_s(ORIGINAL) - min(lambda_s, mu_s)|:
    below the boundary the original system should deliver its arrivals, above
    it the saturated service rate.
    """

    lambda_s: float
    mu_s: float
    runs: list[BoundaryRun]


def boundary_check(
    scenario: ScenarioConfig, slots: int, seeds: Sequence[int]
) -> BoundaryCheck:
    """Run both modes with coupled seeds and compare against the boundary."""
    result = analyze(scenario.channel, scenario.sensing, scenario.traffic)
    lambda_s = scenario.traffic.lambda_s
    expected = min(lambda_s, result.mu_s)
    runs = []
    for seed in seeds:
        dom = run(SimConfig(scenario=scenario, mode=Mode.DOMINANT, slots=slots, seed=seed))
        orig = run(SimConfig(scenario=scenario, mode=Mode.ORIGINAL, slots=slots, seed=seed))
        runs.append(
            BoundaryRun(
                seed=seed,
                verdict_dominant=dom.stability_verdict_s,
                verdict_original=orig.stability_verdict_s,
                throughput_gap=abs(orig.throughput_s - expected),
            )
        )
    return BoundaryCheck(lambda_s=lambda_s, mu_s=result.mu_s, runs=runs)
