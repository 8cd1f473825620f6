"""Command-line front end.

Subcommands: ``rate``, ``threshold``, ``sweep``, ``distance`` and ``env``.
Data goes to stdout (or ``--output``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

from .exceptions import ThermalQKDError
from .scenario import (
    ConfigError,
    build_config,
    default_temperature_c,
    load_config,
    render,
    run,
    write_output,
)
from .thresholds import (
    AttenuationModel,
    ThermalEnvironment,
    distance_from_transmission,
    max_secure_distance,
    threshold_transmission_at,
    transmission_from_distance,
)

DISTANCE_SCHEMES = [("twoway", "rr"), ("twoway", "dr"), ("oneway", "dr"), ("oneway", "rr"), ("oneway", "best")]


def _add_scenario_flags(p: argparse.ArgumentParser, *, threshold: bool) -> None:
    p.add_argument("--config", help="scenario INI file; flags override its values")
    p.add_argument("--protocol", choices=["oneway", "twoway"])
    p.add_argument("--direction", choices=["dr", "rr", "best"])
    if threshold:
        p.add_argument("--solve", choices=["w", "excess_noise", "frequency", "transmission"])
    else:
        p.add_argument("--engine", choices=["asymptotic", "numeric"])
        p.add_argument("--mu", type=float, help="modulation variance (default 1e6)")
    p.add_argument("--v0", type=float, help="preparation noise variance")
    p.add_argument("--frequency-hz", dest="frequency_hz", type=float)
    p.add_argument("--wavelength-m", dest="wavelength_m", type=float)
    p.add_argument("--temperature-c", dest="temperature_c", type=float)
    p.add_argument("--w", help="cloner variance, or 'v0' to match the preparation noise")
    p.add_argument("--excess-noise", dest="excess_noise", type=float)
    p.add_argument("--t", type=float, help="channel transmission")
    p.add_argument("--alpha-db", dest="alpha_db", type=float, help="attenuation in dB per unit length")
    p.add_argument("--unit-length-m", dest="unit_length_m", type=float)
    p.add_argument("--sweep", help="variable:from:to:points[:linear|log]")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--output", dest="path", help="output file (default stdout)")


def _scenario_overrides(args: argparse.Namespace) -> dict:
    keys = [
        "protocol", "direction", "solve", "engine", "mu", "v0", "frequency_hz", "wavelength_m",
        "temperature_c", "w", "excess_noise", "t", "alpha_db", "unit_length_m", "sweep", "format", "path",
    ]
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _cmd_scenario(args: argparse.Namespace, mode: str | None) -> int:
    overrides = _scenario_overrides(args)
    if mode is not None:
        overrides["mode"] = mode
    config_path = getattr(args, "config", None) or getattr(args, "scenario", None)
    if config_path:
        cfg = load_config(config_path, overrides)
    else:
        cfg = build_config(overrides)
    columns, rows = run(cfg)
    write_output(render(columns, rows, cfg.format), cfg.path, sys.stdout)
    return 0


def _temperature_k(args) -> float:
    temp_c = args.temperature_c if args.temperature_c is not None else default_temperature_c()
    return temp_c + 273.15


def _environment(args) -> ThermalEnvironment:
    if (args.frequency_hz is None) == (args.wavelength_m is None):
        raise ConfigError("frequency_hz", "give exactly one of --frequency-hz and --wavelength-m")
    return ThermalEnvironment(_temperature_k(args), args.frequency_hz, args.wavelength_m)


def _cmd_env(args: argparse.Namespace) -> int:
    env = _environment(args)
    columns = ["frequency_hz", "wavelength_m", "temperature_k", "mean_photons", "v0"]
    row = {
        "frequency_hz": env.frequency_hz,
        "wavelength_m": env.wavelength_m,
        "temperature_k": env.temperature_k,
        "mean_photons": env.mean_photons,
        "v0": env.v0(),
    }
    sys.stdout.write(render(columns, [row], args.format))
    return 0


def _cmd_distance(args: argparse.Namespace) -> int:
    att = AttenuationModel(args.alpha_db, args.unit_length_m)
    if args.t is not None:
        columns = ["t", "alpha_db_per_m", "distance_m"]
        rows = [{"t": args.t, "alpha_db_per_m": att.db_per_m, "distance_m": distance_from_transmission(args.t, att)}]
    elif args.distance_m is not None:
        columns = ["distance_m", "alpha_db_per_m", "t"]
        rows = [{"distance_m": args.distance_m, "alpha_db_per_m": att.db_per_m,
                 "t": transmission_from_distance(args.distance_m, att)}]
    else:
        env = _environment(args)
        columns = ["protocol", "direction", "frequency_hz", "temperature_k", "v0",
                   "t_threshold", "alpha_db_per_m", "max_distance_m"]
        rows = []
        for protocol, direction in DISTANCE_SCHEMES:
            d = max_secure_distance(protocol, direction, env, att)
            rows.append({
                "protocol": protocol,
                "direction": direction,
                "frequency_hz": env.frequency_hz,
                "temperature_k": env.temperature_k,
                "v0": env.v0(),
                "t_threshold": threshold_transmission_at(protocol, direction, env),
                "alpha_db_per_m": att.db_per_m,
                "max_distance_m": "unbounded" if math.isinf(d) else d,
            })
    sys.stdout.write(render(columns, rows, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermalqkd",
        description="Key rates and security thresholds for one-way and two-way thermal CV-QKD.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="key rates over a parameter sweep")
    _add_scenario_flags(p, threshold=False)
    p.set_defaults(func=lambda a: _cmd_scenario(a, "rate"))

    p = sub.add_parser("threshold", help="security thresholds over a parameter sweep")
    _add_scenario_flags(p, threshold=True)
    p.set_defaults(func=lambda a: _cmd_scenario(a, "threshold"))

    p = sub.add_parser("sweep", help="run a scenario file (mode and curves taken from the file)")
    p.add_argument("scenario", help="scenario INI file")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--output", dest="path")
    p.set_defaults(func=lambda a: _cmd_scenario(a, None))

    p = sub.add_parser("distance", help="convert transmission <-> distance, or solve secure distances")
    p.add_argument("--alpha-db", dest="alpha_db", type=float, required=True)
    p.add_argument("--unit-length-m", dest="unit_length_m", type=float, default=1.0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", type=float)
    g.add_argument("--distance-m", dest="distance_m", type=float)
    p.add_argument("--frequency-hz", dest="frequency_hz", type=float)
    p.add_argument("--wavelength-m", dest="wavelength_m", type=float)
    p.add_argument("--temperature-c", dest="temperature_c", type=float)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("env", help="preparation noise of a thermal mode")
    p.add_argument("--frequency-hz", dest="frequency_hz", type=float)
    p.add_argument("--wavelength-m", dest="wavelength_m", type=float)
    p.add_argument("--temperature-c", dest="temperature_c", type=float)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_env)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"thermalqkd: config error: {exc}", file=sys.stderr)
        return 2
    except ThermalQKDError as exc:
        print(f"thermalqkd: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
