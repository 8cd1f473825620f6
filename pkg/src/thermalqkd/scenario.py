"""Scenario files, parameter sweeps and tabular output.

A scenario is an INI file::

    [scenario]
    mode = rate            ; or threshold
    protocol = twoway
    direction = rr
    solve = frequency      ; threshold mode only: w | excess_noise | frequency | transmission

    [params]
    v0 = 1                 ; or frequency_hz / wavelength_m (+ temperature_c)
    w = 1                  ; or excess_noise, or the literal "v0"
    t = 0.5

    [sweep]
    variable = t
    from = 0.01
    to = 0.99
    points = 99
    scale = linear

    [curves]
    v0_5 = v0=5
    v0_10 = v0=10

    [output]
    format = csv
    path = out.csv

Keys are flattened (section names are for readability only), so every key
can be overridden from the command line. A relative ``path`` is resolved
against the scenario file's directory.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .exceptions import BracketError, ThermalQKDError
from .oneway import excess_noise_from_w, w_from_excess_noise
from .rates import PROTOCOLS, Direction, asymptotic_breakdown, numeric_breakdown, rate_function
from .thresholds import (
    ZERO_CELSIUS,
    AttenuationModel,
    distance_from_transmission,
    planck_v0,
    solve_threshold_frequency,
    solve_threshold_transmission,
    solve_threshold_w,
)

TEMP_ENV_VAR = "CVQKD_DEFAULT_TEMP_C"
DEFAULT_MU = 1e6

MODES = ("rate", "threshold")
SOLVE_TARGETS = ("w", "excess_noise", "frequency", "transmission")
SWEEP_VARIABLES = ("t", "v0", "w", "frequency")
FORMATS = ("csv", "json")

RATE_COLUMNS = [
    "protocol", "direction", "v0", "w", "t", "mu",
    "mutual_info_bits", "holevo_bits", "rate_bits",
]
FREQUENCY_COLUMNS = ["protocol", "direction", "t", "temperature_k", "f_threshold_hz", "lambda_m"]
W_COLUMNS = ["protocol", "direction", "v0", "t", "w_threshold", "excess_noise_threshold"]
TRANSMISSION_COLUMNS = ["protocol", "direction", "v0", "w", "t_threshold"]
DISTANCE_COLUMNS = ["alpha_db_per_m", "max_distance_m"]
SOURCE_COLUMNS = ["frequency_hz", "temperature_k"]

FLOAT_KEYS = {
    "v0", "w", "t", "mu", "excess_noise", "frequency_hz", "wavelength_m",
    "temperature_c", "alpha_db", "unit_length_m",
}


class ConfigError(ThermalQKDError, ValueError):
    """Invalid scenario configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def default_temperature_c() -> float:
    raw = os.environ.get(TEMP_ENV_VAR, "15")
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(TEMP_ENV_VAR, f"not a number: {raw!r}") from None


@dataclass(frozen=True)
class Sweep:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError("sweep.variable", f"must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if not self.start < self.stop:
            raise ConfigError("sweep.from", f"'from' ({self.start}) must be below 'to' ({self.stop})")
        if self.points < 2:
            raise ConfigError("sweep.points", f"need at least 2 points, got {self.points}")
        if self.scale not in ("linear", "log"):
            raise ConfigError("sweep.scale", f"must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ConfigError("sweep.from", "log sweeps need a positive start")

    @classmethod
    def parse(cls, text: str) -> Sweep:
        """Parse ``variable:from:to:points[:scale]``."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ConfigError("sweep", f"expected variable:from:to:points[:scale], got {text!r}")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), *parts[4:])
        except ValueError as exc:
            raise ConfigError("sweep", f"cannot parse {text!r}: {exc}") from None

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str = "rate"
    protocol: str = "twoway"
    direction: str = "rr"
    solve: str | None = None
    engine: str = "asymptotic"
    params: dict = field(default_factory=dict)
    sweep: Sweep | None = None
    curves: tuple = ()
    format: str = "csv"
    path: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        if self.protocol not in PROTOCOLS:
            raise ConfigError("protocol", f"must be one of {PROTOCOLS}, got {self.protocol!r}")
        try:
            Direction(self.direction)
        except ValueError:
            raise ConfigError("direction", f"must be dr, rr or best, got {self.direction!r}") from None
        if self.engine not in ("asymptotic", "numeric"):
            raise ConfigError("engine", f"must be 'asymptotic' or 'numeric', got {self.engine!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}, got {self.format!r}")
        if self.mode == "threshold" and self.solve not in SOLVE_TARGETS:
            raise ConfigError("solve", f"threshold mode needs solve in {SOLVE_TARGETS}, got {self.solve!r}")
        p = self.params
        sources = [k for k in ("v0", "frequency_hz", "wavelength_m") if k in p]
        if len(sources) > 1:
            raise ConfigError(sources[1], f"v0, frequency_hz and wavelength_m are mutually exclusive (got {sources})")
        if "w" in p and "excess_noise" in p:
            raise ConfigError("excess_noise", "give either w or excess_noise, not both")
        if self.sweep is not None and self.sweep.variable == "frequency" and "v0" in p:
            raise ConfigError("v0", "a frequency sweep sets v0 through the Planck law; drop v0")
        if self.sweep is not None and self.sweep.variable == "v0" and sources and sources[0] != "v0":
            raise ConfigError(sources[0], "a v0 sweep cannot be combined with a frequency or wavelength")

    def with_overrides(self, overrides: dict) -> ScenarioConfig:
        top = {k: v for k, v in overrides.items() if k in _TOP_KEYS}
        params = dict(self.params)
        for k, v in overrides.items():
            if k not in _TOP_KEYS:
                params.update(_param_override(k, v))
        return replace(self, params=params, **top)


_TOP_KEYS = {"mode", "protocol", "direction", "solve", "engine", "format", "path"}


def _param_override(key: str, value) -> dict:
    if key not in FLOAT_KEYS:
        raise ConfigError(key, "unknown parameter")
    if key == "w" and isinstance(value, str) and value.strip().lower() == "v0":
        return {"w": "v0"}
    try:
        return {key: float(value)}
    except (TypeError, ValueError):
        raise ConfigError(key, f"not a number: {value!r}") from None


def _parse_curve(name: str, text: str) -> tuple[str, dict]:
    overrides = {}
    for item in text.split():
        if "=" not in item:
            raise ConfigError(f"curves.{name}", f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in _TOP_KEYS and k not in FLOAT_KEYS:
            raise ConfigError(f"curves.{name}", f"unknown key {k!r}")
        overrides[k] = v
    return name, overrides


def load_config(path: str | os.PathLike, overrides: dict | None = None) -> ScenarioConfig:
    """Read a scenario file; ``overrides`` (from flags) take precedence."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError("config", str(exc)) from None

    flat: dict = {}
    curves = []
    sweep_keys = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if section == "curves":
                curves.append(_parse_curve(key, value))
            elif section == "sweep":
                sweep_keys[key] = value
            else:
                flat[key] = value
    if flat.get("path") not in (None, "-") and not Path(flat["path"]).is_absolute():
        flat["path"] = str(Path(path).parent / flat["path"])
    flat.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return build_config(flat, sweep_keys=sweep_keys, curves=tuple(curves))


def build_config(flat: dict, sweep_keys: dict | None = None, curves: tuple = ()) -> ScenarioConfig:
    """Assemble a validated config from flat ``key -> value`` settings."""
    flat = dict(flat)
    sweep = flat.pop("sweep", None)
    if isinstance(sweep, str):
        sweep = Sweep.parse(sweep)
    elif sweep is None and sweep_keys:
        try:
            sweep = Sweep(
                sweep_keys.get("variable", ""),
                float(sweep_keys["from"]),
                float(sweep_keys["to"]),
                int(sweep_keys["points"]),
                sweep_keys.get("scale", "linear"),
            )
        except KeyError as exc:
            raise ConfigError(f"sweep.{exc.args[0]}", "missing") from None
        except ValueError as exc:
            raise ConfigError("sweep", str(exc)) from None

    top = {k: flat.pop(k) for k in list(flat) if k in _TOP_KEYS}
    params = {}
    for k, v in flat.items():
        params.update(_param_override(k, v))
    return ScenarioConfig(sweep=sweep, curves=curves, params=params, **top)


@dataclass(frozen=True)
class Point:
    """Fully resolved inputs for a single evaluation."""

    v0: float | None
    t: float | None
    w: float | str | None
    temperature_k: float
    frequency_hz: float | None


def _resolve(cfg: ScenarioConfig, sweep_value: float | None) -> Point:
    p = dict(cfg.params)
    if cfg.sweep is not None:
        var = cfg.sweep.variable
        p["frequency_hz" if var == "frequency" else var] = sweep_value
        if var == "frequency":
            p.pop("wavelength_m", None)
    temp_c = p.get("temperature_c", default_temperature_c())
    temperature_k = temp_c + ZERO_CELSIUS
    if temperature_k <= 0:
        raise ConfigError("temperature_c", f"below absolute zero: {temp_c}")

    frequency = p.get("frequency_hz")
    if frequency is None and "wavelength_m" in p:
        from .thresholds import SPEED_OF_LIGHT

        frequency = SPEED_OF_LIGHT / p["wavelength_m"]
    v0 = p.get("v0")
    if v0 is None and frequency is not None:
        v0 = planck_v0(frequency, temperature_k)

    t = p.get("t")
    w = p.get("w")
    if w == "v0":
        w = v0
    if w is None and "excess_noise" in p and t is not None:
        w = float(w_from_excess_noise(p["excess_noise"], t))
    return Point(v0, t, w, temperature_k, frequency)


def _require(point: Point, names: tuple[str, ...], context: str):
    for name in names:
        if getattr(point, name) is None:
            raise ConfigError(name, f"required for {context}")


def _sweep_values(cfg: ScenarioConfig):
    return [None] if cfg.sweep is None else [float(x) for x in cfg.sweep.values()]


def _describe(cfg: ScenarioConfig, value) -> str:
    return "" if cfg.sweep is None else f" at {cfg.sweep.variable}={value!r}"


def _source_fields(cfg: ScenarioConfig, point: Point) -> dict:
    if point.frequency_hz is None:
        return {}
    return {"frequency_hz": point.frequency_hz, "temperature_k": point.temperature_k}


def run_rate(cfg: ScenarioConfig) -> tuple[list[str], list[dict]]:
    """One row per sweep point with inputs, mutual information, Holevo bound and rate."""
    columns = list(RATE_COLUMNS)
    rows = []
    for value in _sweep_values(cfg):
        point = _resolve(cfg, value)
        _require(point, ("v0", "t", "w"), "rate")
        mu = cfg.params.get("mu", DEFAULT_MU)
        try:
            if cfg.engine == "numeric":
                rb = numeric_breakdown(cfg.protocol, cfg.direction, point.v0, point.t, point.w, mu)
            else:
                rb = asymptotic_breakdown(cfg.protocol, cfg.direction, point.v0, point.t, point.w, mu)
        except ThermalQKDError as exc:
            raise type(exc)(f"{exc}{_describe(cfg, value)}") from exc
        row = {
            "protocol": cfg.protocol,
            "direction": cfg.direction,
            "v0": point.v0,
            "w": point.w,
            "t": point.t,
            "mu": mu,
            "mutual_info_bits": rb.mutual_info,
            "holevo_bits": rb.holevo,
            "rate_bits": rb.rate,
        }
        extra = _source_fields(cfg, point)
        if extra:
            row.update(extra)
            if SOURCE_COLUMNS[0] not in columns:
                columns += SOURCE_COLUMNS
        rows.append(row)
    return columns, rows


def _attenuation(cfg: ScenarioConfig) -> AttenuationModel | None:
    if "alpha_db" not in cfg.params:
        return None
    try:
        return AttenuationModel(cfg.params["alpha_db"], cfg.params.get("unit_length_m", 1.0))
    except ThermalQKDError as exc:
        raise ConfigError("alpha_db", str(exc)) from None


def _distance(att: AttenuationModel | None, t) -> dict:
    if att is None:
        return {}
    if t is None or isinstance(t, str):
        dist = t if isinstance(t, str) else "none"
    elif t == 0.0:
        dist = "unbounded"
    else:
        dist = distance_from_transmission(t, att)
    return {"alpha_db_per_m": att.db_per_m, "max_distance_m": dist}


def run_threshold(cfg: ScenarioConfig) -> tuple[list[str], list[dict]]:
    """One row per sweep point with the solved threshold and derived quantities."""
    att = _attenuation(cfg)
    rate_fn = rate_function(cfg.protocol, cfg.direction)
    if cfg.solve == "frequency":
        columns = list(FREQUENCY_COLUMNS)
    elif cfg.solve in ("w", "excess_noise"):
        columns = list(W_COLUMNS)
    else:
        columns = list(TRANSMISSION_COLUMNS)
    if att is not None and cfg.solve in ("frequency", "transmission"):
        columns += DISTANCE_COLUMNS

    rows = []
    for value in _sweep_values(cfg):
        point = _resolve(cfg, value)
        row = {"protocol": cfg.protocol, "direction": cfg.direction}
        try:
            if cfg.solve == "frequency":
                _require(point, ("t",), "a frequency threshold")
                ft = solve_threshold_frequency(cfg.protocol, cfg.direction, point.t, point.temperature_k)
                ok = ft.status == "ok"
                row.update(
                    t=point.t,
                    temperature_k=point.temperature_k,
                    f_threshold_hz=ft.frequency_hz if ok else ft.status,
                    lambda_m=ft.wavelength_m if ok else ft.status,
                )
                # secure at f* for any link whose transmission is at least t
                row.update(_distance(att, point.t if ok else ft.status))
            elif cfg.solve in ("w", "excess_noise"):
                _require(point, ("v0", "t"), "a noise threshold")
                try:
                    w_star = solve_threshold_w(rate_fn, point.v0, point.t)
                    n_star = float(excess_noise_from_w(w_star, point.t))
                except BracketError:
                    w_star = n_star = "unbounded"
                row.update(v0=point.v0, t=point.t, w_threshold=w_star, excess_noise_threshold=n_star)
            else:
                _require(point, ("v0",), "a transmission threshold")
                w = point.v0 if point.w is None else point.w
                t_star = solve_threshold_transmission(rate_fn, point.v0, w)
                row.update(v0=point.v0, w=w, t_threshold=t_star)
                row.update(_distance(att, t_star))
        except ConfigError:
            raise
        except ThermalQKDError as exc:
            raise type(exc)(f"{exc}{_describe(cfg, value)}") from exc
        extra = _source_fields(cfg, point)
        if extra and cfg.solve != "frequency":
            row.update(extra)
            if SOURCE_COLUMNS[0] not in columns:
                columns += SOURCE_COLUMNS
        rows.append(row)
    return columns, rows


def run(cfg: ScenarioConfig) -> tuple[list[str], list[dict]]:
    """Run every curve of ``cfg`` (or the base config alone) and concatenate the rows."""
    runner = run_rate if cfg.mode == "rate" else run_threshold
    if not cfg.curves:
        return runner(cfg)
    columns: list[str] = []
    rows: list[dict] = []
    for name, overrides in cfg.curves:
        sub = replace(cfg.with_overrides(overrides), curves=())
        cols, sub_rows = (run_rate if sub.mode == "rate" else run_threshold)(sub)
        for c in cols:
            if c not in columns:
                columns.append(c)
        rows.extend({"curve": name, **r} for r in sub_rows)
    return ["curve", *columns], rows


def format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def render(columns: list[str], rows: list[dict], fmt: str = "csv") -> str:
    """Serialize rows deterministically; floats use 17 significant digits."""
    if fmt == "json":
        data = [{c: _json_value(r.get(c, "")) for c in columns} for r in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([format_value(r.get(c, "")) for c in columns])
    return buf.getvalue()


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else format_value(value)
    return value


def write_output(text: str, path: str | None, stream) -> None:
    if path is None or path == "-":
        stream.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
