"""Command-line front end: analyze, optimize, simulate, sweep, compare.

Outputs are CSV (one header row, LF line endings, floats printed with
shortest round-trip formatting) or JSON.  Exit codes: 0 success, 1 usage
or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from enum import Enum
from pathlib import Path

from .analysis import (
    UnstablePrimaryError,
    analyze,
    secondary_service_rate,
    single_band_service_rate,
)
from .channel import PowerMode, pu_success_prob
from .config import (
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    apply_axis,
    load_config,
)
from .optimize import optimize_sensed_bands
from .simulate import Mode, SimConfig, run

__all__ = ["main"]

_INT_AXES = {"m_bands", "k_antennas"}


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Enum):
        return value.value
    return str(value)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_scenario(path) -> ScenarioConfig:
    cfg = load_config(path)
    if isinstance(cfg, SweepSpec):
        raise ConfigError(
            f"{path}: expected a scenario config, found a sweep (axis/values present)"
        )
    return cfg


def _load_sweep(path) -> SweepSpec:
    cfg = load_config(path)
    if not isinstance(cfg, SweepSpec):
        raise ConfigError(f"{path}: expected a sweep config with axis and values")
    return cfg


def _axis_value(axis: str, value: float):
    return int(value) if axis in _INT_AXES else value


def cmd_analyze(args) -> str:
    scenario = _load_scenario(args.config)
    result = analyze(scenario.channel, scenario.sensing, scenario.traffic)
    if args.format == "json":
        return _json_text(
            {
                "label": scenario.label,
                "mu_p": result.mu_p,
                "pi": result.pi,
                "mu_s": result.mu_s,
                "primary_stable": result.primary_stable,
                "secondary_stable": result.secondary_stable,
            }
        )
    header = ["mu_p", "pi", "mu_s", "primary_stable", "secondary_stable"]
    row = [
        result.mu_p,
        result.pi,
        result.mu_s,
        result.primary_stable,
        result.secondary_stable,
    ]
    return _csv(header, [row])


def cmd_optimize(args) -> str:
    scenario = _load_scenario(args.config)
    opt = optimize_sensed_bands(scenario.channel, scenario.sensing, scenario.traffic)
    if args.format == "json":
        # Unsensed primaries never see secondary interference, so they are
        # served at the raw link rate; report both so consumers can tell.
        p_bar = pu_success_prob(scenario.channel)
        return _json_text(
            {
                "label": scenario.label,
                "m_opt": opt.m_opt,
                "mu_s_opt": opt.mu_s_opt,
                "mu_p_sensed_bands": p_bar * (1.0 - scenario.sensing.p_md),
                "mu_p_unsensed_bands": p_bar,
                "profile": [[m, rate] for m, rate in opt.profile],
            }
        )
    return _csv(["m", "mu_s"], opt.profile)


def cmd_simulate(args) -> str:
    scenario = _load_scenario(args.config)
    cfg = SimConfig(
        scenario=scenario,
        mode=Mode[args.mode.upper()],
        slots=args.slots,
        seed=args.seed,
        warmup=args.warmup,
    )
    report = run(cfg, trace_path=args.trace)
    try:
        result = analyze(scenario.channel, scenario.sensing, scenario.traffic)
        mu_p_analytical, mu_s_analytical = result.mu_p, result.mu_s
    except UnstablePrimaryError:
        mu_p_analytical = mu_s_analytical = None
    data = report.to_dict()
    data["mu_p_analytical"] = mu_p_analytical
    data["mu_s_analytical"] = mu_s_analytical
    if args.format == "json":
        data["label"] = scenario.label
        return _json_text(data)
    header = list(data.keys())
    return _csv(header, [[data[k] for k in header]])


def cmd_sweep(args) -> str:
    spec = _load_sweep(args.config)
    sim_slots = args.slots if args.slots is not None else spec.sim_slots
    sim_seed = args.seed if args.seed is not None else spec.sim_seed
    header = [
        "axis_value",
        "status",
        "mu_p",
        "pi",
        "mu_s_analytical",
        "mu_s_simulated",
        "std_err",
        "m_opt",
    ]
    rows = []
    for index, value in enumerate(spec.values):
        scenario = apply_axis(spec.base, spec.axis, value)
        axis_value = _axis_value(spec.axis, value)
        try:
            result = analyze(scenario.channel, scenario.sensing, scenario.traffic)
        except UnstablePrimaryError:
            rows.append([axis_value, "skipped", None, None, None, None, None, None])
            continue
        m_opt = None
        if spec.axis != "m_bands":
            m_opt = optimize_sensed_bands(
                scenario.channel, scenario.sensing, scenario.traffic
            ).m_opt
        mu_s_simulated = std_err = None
        if spec.with_simulation:
            report = run(
                SimConfig(
                    scenario=scenario,
                    mode=Mode.DOMINANT,
                    slots=sim_slots,
                    seed=sim_seed + index,
                )
            )
            mu_s_simulated = report.empirical_mu_s
            std_err = report.std_err_mu_s
        rows.append(
            [
                axis_value,
                "ok",
                result.mu_p,
                result.pi,
                result.mu_s,
                mu_s_simulated,
                std_err,
                m_opt,
            ]
        )
    if args.format == "json":
        return _json_text(
            [{k: v for k, v in zip(header, row)} for row in rows]
        )
    return _csv(header, rows)


def cmd_compare(args) -> str:
    spec = _load_sweep(args.config)
    header = ["axis_value", "status", "mu_s_psd", "mu_s_limited", "mu_s_single_band"]
    rows = []
    for value in spec.values:
        scenario = apply_axis(spec.base, spec.axis, value)
        axis_value = _axis_value(spec.axis, value)
        psd = replace(scenario.channel, power_mode=PowerMode.PSD)
        limited = replace(scenario.channel, power_mode=PowerMode.LIMITED)
        try:
            mu_psd = secondary_service_rate(psd, scenario.sensing, scenario.traffic)
            mu_limited = secondary_service_rate(
                limited, scenario.sensing, scenario.traffic
            )
            mu_single = single_band_service_rate(
                psd, scenario.sensing, scenario.traffic
            )
        except UnstablePrimaryError:
            rows.append([axis_value, "skipped", None, None, None])
            continue
        rows.append([axis_value, "ok", mu_psd, mu_limited, mu_single])
    if args.format == "json":
        return _json_text([{k: v for k, v in zip(header, row)} for row in rows])
    return _csv(header, rows)


def _build_parser() -> _Parser:
    parser = _Parser(prog="specagg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("analyze", help="closed-form rates for one scenario")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", help="sensed-band count maximizing the service rate")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo run with analytical columns")
    common(p)
    p.add_argument("--mode", choices=("dominant", "original"), default="dominant")
    p.add_argument("--slots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--trace", default=None, help="stream per-slot records to this file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one row per axis value, analytical and simulated")
    common(p)
    p.add_argument("--slots", type=int, default=None, help="override sim_slots")
    p.add_argument("--seed", type=int, default=None, help="override sim_seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="both power modes vs the single-band baseline")
    common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        text = args.func(args)
    except ConfigError as exc:
        print(f"specagg: config error: {exc}", file=sys.stderr)
        return 1
    except UnstablePrimaryError as exc:
        print(f"specagg: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"specagg: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
