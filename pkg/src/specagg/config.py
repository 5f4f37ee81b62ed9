"""Scenario and sweep configuration: validated containers plus JSON loading."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .analysis import TrafficParams
from .channel import ChannelParams, PowerMode
from .sensing import SensingParams

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SweepSpec",
    "SWEEP_AXES",
    "load_config",
    "apply_axis",
]

SCENARIO_KEYS = {
    "m_bands",
    "k_antennas",
    "tau_b_frac",
    "spectral_eff_r",
    "snr_s",
    "snr_p",
    "p_bar_p",
    "p_fa",
    "p_md",
    "lambda_p",
    "lambda_s",
    "power_mode",
    "label",
}
SWEEP_ONLY_KEYS = {"axis", "values", "with_simulation", "sim_slots", "sim_seed"}

SWEEP_AXES = (
    "m_bands",
    "k_antennas",
    "lambda_p",
    "lambda_s",
    "spectral_eff_r",
    "tau_b_frac",
    "p_fa",
    "p_md",
)
_INT_AXES = {"m_bands", "k_antennas"}


class ConfigError(Exception):
    """A configuration file or mapping violates the documented schema."""


@dataclass(frozen=True)
class ScenarioConfig:
    """One complete operating point: channel, sensing, and traffic parameters."""

    channel: ChannelParams
    sensing: SensingParams
    traffic: TrafficParams
    label: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional parameter sweep over a base scenario."""

    base: ScenarioConfig
    axis: str
    values: list[float]
    with_simulation: bool = False
    sim_slots: int | None = None
    sim_seed: int | None = None


def _require_number(raw: dict, key: str) -> float:
    if key not in raw:
        raise ConfigError(f"{key}: missing required key")
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    return float(value)


def _require_int(raw: dict, key: str) -> int:
    value = _require_number(raw, key)
    if value != int(value):
        raise ConfigError(f"{key}: expected an integer, got {raw[key]!r}")
    return int(value)


def _in_unit_interval(key: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{key}: must be in [0, 1], got {value}")
    return value


def scenario_from_mapping(raw: dict) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a flat key/value mapping."""
    unknown = set(raw) - SCENARIO_KEYS
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}")

    if ("snr_p" in raw) == ("p_bar_p" in raw):
        raise ConfigError("exactly one of snr_p / p_bar_p must be present")
    snr_p = _require_number(raw, "snr_p") if "snr_p" in raw else None
    p_bar_p = None
    if "p_bar_p" in raw:
        p_bar_p = _in_unit_interval("p_bar_p", _require_number(raw, "p_bar_p"))

    mode_raw = raw.get("power_mode", "PSD")
    if not isinstance(mode_raw, str) or mode_raw.upper() not in ("PSD", "LIMITED"):
        raise ConfigError(f"power_mode: expected 'PSD' or 'LIMITED', got {mode_raw!r}")

    label = raw.get("label")
    if label is not None and not isinstance(label, str):
        raise ConfigError(f"label: expected a string, got {label!r}")

    m_bands = _require_int(raw, "m_bands")
    k_antennas = _require_int(raw, "k_antennas")
    if m_bands < 1:
        raise ConfigError(f"m_bands: must be >= 1, got {m_bands}")
    if k_antennas < 1:
        raise ConfigError(f"k_antennas: must be >= 1, got {k_antennas}")

    spectral_eff_r = _require_number(raw, "spectral_eff_r")
    if spectral_eff_r <= 0:
        raise ConfigError(f"spectral_eff_r: must be > 0, got {spectral_eff_r}")
    snr_s = _require_number(raw, "snr_s")
    if snr_s <= 0:
        raise ConfigError(f"snr_s: must be > 0, got {snr_s}")
    if snr_p is not None and snr_p <= 0:
        raise ConfigError(f"snr_p: must be > 0, got {snr_p}")

    channel = ChannelParams(
        snr_s=snr_s,
        spectral_eff_r=spectral_eff_r,
        tau_b_frac=_in_unit_interval("tau_b_frac", _require_number(raw, "tau_b_frac")),
        m_bands=m_bands,
        k_antennas=k_antennas,
        snr_p=snr_p,
        p_bar_p=p_bar_p,
        power_mode=PowerMode[mode_raw.upper()],
    )
    sensing = SensingParams(
        p_fa=_in_unit_interval("p_fa", _require_number(raw, "p_fa")),
        p_md=_in_unit_interval("p_md", _require_number(raw, "p_md")),
    )
    traffic = TrafficParams(
        lambda_p=_in_unit_interval("lambda_p", _require_number(raw, "lambda_p")),
        lambda_s=_in_unit_interval("lambda_s", _require_number(raw, "lambda_s")),
    )
    return ScenarioConfig(channel=channel, sensing=sensing, traffic=traffic, label=label)


def sweep_from_mapping(raw: dict) -> SweepSpec:
    """Build a validated SweepSpec from a flat key/value mapping."""
    unknown = set(raw) - SCENARIO_KEYS - SWEEP_ONLY_KEYS
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}")

    axis = raw.get("axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis: expected one of {SWEEP_AXES}, got {axis!r}")
    values_raw = raw.get("values")
    if not isinstance(values_raw, list) or not values_raw:
        raise ConfigError("values: expected a non-empty list of numbers")
    values: list[float] = []
    for i, v in enumerate(values_raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"values[{i}]: expected a number, got {v!r}")
        if axis in _INT_AXES and v != int(v):
            raise ConfigError(f"values[{i}]: axis {axis} needs integers, got {v!r}")
        values.append(float(v))

    with_simulation = raw.get("with_simulation", False)
    if not isinstance(with_simulation, bool):
        raise ConfigError(
            f"with_simulation: expected a boolean, got {with_simulation!r}"
        )
    sim_slots = sim_seed = None
    if with_simulation:
        sim_slots = _require_int(raw, "sim_slots")
        if sim_slots < 1:
            raise ConfigError(f"sim_slots: must be >= 1, got {sim_slots}")
        sim_seed = _require_int(raw, "sim_seed")
        if sim_seed < 0:
            raise ConfigError(f"sim_seed: must be >= 0, got {sim_seed}")
    elif "sim_slots" in raw or "sim_seed" in raw:
        raise ConfigError("sim_slots/sim_seed only apply with with_simulation=true")

    base = scenario_from_mapping(
        {k: v for k, v in raw.items() if k in SCENARIO_KEYS}
    )
    return SweepSpec(
        base=base,
        axis=axis,
        values=values,
        with_simulation=with_simulation,
        sim_slots=sim_slots,
        sim_seed=sim_seed,
    )


def load_config(path: str | Path) -> ScenarioConfig | SweepSpec:
    """Load a scenario or sweep description from a JSON file.

    A file containing an "axis" or "values" key is a sweep, anything else
    a single scenario.  Violations raise ConfigError naming the offending
    key and constraint.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a JSON object at top level")
    try:
        if "axis" in raw or "values" in raw:
            return sweep_from_mapping(raw)
        return scenario_from_mapping(raw)
    except ValueError as exc:  # invariant re-checks inside the dataclasses
        raise ConfigError(str(exc)) from exc


def apply_axis(scenario: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    """Return a copy of the scenario with one swept field replaced."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis: expected one of {SWEEP_AXES}, got {axis!r}")
    if axis in _INT_AXES:
        value = int(value)
    if axis in ("p_fa", "p_md"):
        return replace(scenario, sensing=replace(scenario.sensing, **{axis: value}))
    if axis in ("lambda_p", "lambda_s"):
        return replace(scenario, traffic=replace(scenario.traffic, **{axis: value}))
    return replace(scenario, channel=replace(scenario.channel, **{axis: value}))
