"""Security thresholds, the blackbody noise model and attenuation-to-distance conversion.

A threshold is the value of one parameter (cloner variance, excess noise,
transmission or frequency) at which the key rate crosses zero. All roots
are found by bracketed bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .exceptions import BracketError, DomainError
from .oneway import excess_noise_from_w
from .rates import Direction, rate_function

PLANCK = 6.62607015e-34  # J s
BOLTZMANN = 1.380649e-23  # J / K
SPEED_OF_LIGHT = 2.99792458e8  # m / s
ZERO_CELSIUS = 273.15
DEFAULT_TEMPERATURE_K = 288.15

W_MAX = 1e12
T_MIN = 1e-9
T_MAX = 1 - 1e-9
LOG10_F_MIN = 9.0
LOG10_F_MAX = 16.0
# exp(700) is close to the float64 limit
MAX_EXPONENT = 700.0

RateFn = Callable[..., float]


def planck_v0(frequency_hz, temperature_k):
    """Quadrature variance ``2 n + 1`` of a thermal mode; ``n`` is the Planck occupation."""
    f = np.asarray(frequency_hz, dtype=float)
    if np.any(f <= 0) or np.any(np.asarray(temperature_k) <= 0):
        raise DomainError("frequency and temperature must be positive")
    x = PLANCK * f / (BOLTZMANN * np.asarray(temperature_k, dtype=float))
    with np.errstate(over="ignore"):
        v0 = np.where(x > MAX_EXPONENT, 1.0, 1.0 + 2.0 / np.expm1(np.minimum(x, MAX_EXPONENT)))
    return float(v0) if v0.ndim == 0 else v0


@dataclass(frozen=True)
class ThermalEnvironment:
    """A bosonic mode at ``frequency_hz`` (or ``wavelength_m``) in a bath at ``temperature_k``."""

    temperature_k: float = DEFAULT_TEMPERATURE_K
    frequency_hz: float | None = None
    wavelength_m: float | None = None

    def __post_init__(self):
        if self.temperature_k <= 0:
            raise DomainError(f"temperature must be positive, got {self.temperature_k}")
        if (self.frequency_hz is None) == (self.wavelength_m is None):
            raise DomainError("give exactly one of frequency_hz and wavelength_m")
        if self.frequency_hz is None:
            if self.wavelength_m <= 0:
                raise DomainError(f"wavelength must be positive, got {self.wavelength_m}")
            object.__setattr__(self, "frequency_hz", SPEED_OF_LIGHT / self.wavelength_m)
        elif self.frequency_hz <= 0:
            raise DomainError(f"frequency must be positive, got {self.frequency_hz}")
        else:
            object.__setattr__(self, "wavelength_m", SPEED_OF_LIGHT / self.frequency_hz)

    @classmethod
    def from_celsius(cls, temperature_c: float, **kwargs) -> ThermalEnvironment:
        return cls(temperature_k=temperature_c + ZERO_CELSIUS, **kwargs)

    @property
    def mean_photons(self) -> float:
        return (self.v0() - 1.0) / 2.0

    def v0(self) -> float:
        return planck_v0(self.frequency_hz, self.temperature_k)


def v0_from_environment(env: ThermalEnvironment) -> float:
    return env.v0()


@dataclass(frozen=True)
class AttenuationModel:
    """Loss of ``alpha_db`` decibels per ``unit_length_m`` metres."""

    alpha_db: float
    unit_length_m: float = 1.0

    def __post_init__(self):
        if self.alpha_db <= 0 or self.unit_length_m <= 0:
            raise DomainError("attenuation and unit length must be positive")

    @property
    def db_per_m(self) -> float:
        return self.alpha_db / self.unit_length_m


def distance_from_transmission(t, att: AttenuationModel):
    """Distance in metres over which the link transmission drops to ``t``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise DomainError(f"transmission must lie in (0, 1], got {t}")
    d = -10.0 * np.log10(t) / att.db_per_m
    return float(d) if d.ndim == 0 else d


def transmission_from_distance(d, att: AttenuationModel):
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise DomainError(f"distance must be >= 0, got {d}")
    t = 10.0 ** (-att.db_per_m * d / 10.0)
    return float(t) if t.ndim == 0 else t


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    return optimize.bisect(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_threshold_w(rate_fn: RateFn, v0: float, t: float) -> float:
    """Largest cloner variance ``w`` with non-negative rate.

    Returns 1.0 when the protocol is insecure even without channel noise.
    Raises :class:`BracketError` when the rate is still positive at ``w = 1e12``.
    """

    def g(w):
        return float(rate_fn(v0, t, w))

    if g(1.0) <= 0:
        return 1.0
    lo, hi = 1.0, 2.0
    while g(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > W_MAX:
            raise BracketError(f"rate still positive at w = {W_MAX:g}; threshold unbounded")
    return _bisect(g, lo, hi)


def solve_threshold_excess_noise(rate_fn: RateFn, v0: float, t: float) -> float:
    """Tolerable excess noise ``(w* - 1)(1 - t)/t``; zero if insecure at every ``w``."""
    return float(excess_noise_from_w(solve_threshold_w(rate_fn, v0, t), t))


def solve_threshold_transmission(rate_fn: RateFn, v0: float, w: float | None = None) -> float:
    """Smallest transmission with non-negative rate.

    ``w`` defaults to ``v0`` (Eve matches the preparation noise). Returns
    0.0 when the rate is non-negative down to ``t = 1e-9`` and 1.0 when it
    is negative up to ``t = 1 - 1e-9``.
    """
    w = v0 if w is None else w

    def g(t):
        return float(rate_fn(v0, t, w))

    if g(T_MIN) >= 0:
        return 0.0
    if g(T_MAX) < 0:
        return 1.0
    return _bisect(g, T_MIN, T_MAX)


@dataclass(frozen=True)
class FrequencyThreshold:
    """Minimum tolerable frequency.

    ``status`` is ``"ok"``, ``"secure_all"`` (secure down to 1 GHz) or
    ``"insecure_all"`` (insecure up to 10 PHz); ``frequency_hz`` is ``None``
    unless the status is ``"ok"``.
    """

    status: str
    frequency_hz: float | None = None

    @property
    def wavelength_m(self) -> float | None:
        if self.frequency_hz is None:
            return None
        return SPEED_OF_LIGHT / self.frequency_hz


def solve_threshold_frequency(
    protocol: str,
    direction: str | Direction,
    t_transmission: float,
    env_temperature: float = DEFAULT_TEMPERATURE_K,
) -> FrequencyThreshold:
    """Minimum frequency at which the protocol is secure with ``w = v0(f)``.

    ``env_temperature`` is in kelvin. Bisection runs on ``log10 f`` over
    ``[9, 16]``.
    """
    rate_fn = rate_function(protocol, direction)

    def g(log10_f):
        v0 = planck_v0(10.0**log10_f, env_temperature)
        return float(rate_fn(v0, t_transmission, v0))

    if g(LOG10_F_MIN) >= 0:
        return FrequencyThreshold("secure_all")
    if g(LOG10_F_MAX) < 0:
        return FrequencyThreshold("insecure_all")
    return FrequencyThreshold("ok", 10.0 ** _bisect(g, LOG10_F_MIN, LOG10_F_MAX))


def threshold_transmission_at(protocol: str, direction, env: ThermalEnvironment) -> float:
    """Minimum secure transmission for a mode in ``env`` when Eve sets ``w = v0``."""
    v0 = env.v0()
    return solve_threshold_transmission(rate_function(protocol, direction), v0, v0)


def max_secure_distance(protocol: str, direction, env: ThermalEnvironment, att: AttenuationModel) -> float:
    """Longest link (metres) that stays secure; ``inf`` if secure at every loss."""
    t_star = threshold_transmission_at(protocol, direction, env)
    if t_star == 0.0:
        return math.inf
    return distance_from_transmission(t_star, att)


def solve_oneway_crossing(
    temperature_k: float = DEFAULT_TEMPERATURE_K,
    t_grid: np.ndarray | None = None,
) -> tuple[float, float]:
    """Transmission and frequency where the one-way DR and RR frequency thresholds meet.

    A grid scan over ``t`` locates the sign change of
    ``log f_DR(t) - log f_RR(t)``, which is then refined by bisection.
    """
    if t_grid is None:
        t_grid = np.linspace(0.505, 0.995, 99)

    def gap(t):
        dr = solve_threshold_frequency("oneway", "dr", t, temperature_k)
        rr = solve_threshold_frequency("oneway", "rr", t, temperature_k)
        if dr.status != "ok" or rr.status != "ok":
            return None
        return math.log(dr.frequency_hz) - math.log(rr.frequency_hz)

    prev_t, prev_gap = None, None
    for t in t_grid:
        cur = gap(float(t))
        if cur is not None and prev_gap is not None and (cur == 0 or (cur > 0) != (prev_gap > 0)):
            t_cross = _bisect(gap, prev_t, float(t)) if cur != 0 else float(t)
            f = solve_threshold_frequency("oneway", "dr", t_cross, temperature_k).frequency_hz
            return t_cross, f
        if cur is not None:
            prev_t, prev_gap = float(t), cur
    raise BracketError("one-way DR and RR frequency thresholds do not cross on the grid")
