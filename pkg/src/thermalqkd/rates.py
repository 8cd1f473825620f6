"""Rate containers and the protocol/direction dispatch table."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .exceptions import DomainError


class Direction(str, Enum):
    DR = "dr"
    RR = "rr"
    BEST = "best"


PROTOCOLS = ("oneway", "twoway")


@dataclass(frozen=True)
class RateBreakdown:
    """Mutual information, Holevo bound and key rate, all in bits per use."""

    mutual_info: float
    holevo: float
    direction: Direction

    @property
    def rate(self) -> float:
        return self.mutual_info - self.holevo


RateFunction = Callable[..., float]


def rate_function(protocol: str, direction: str | Direction) -> RateFunction:
    """Asymptotic rate ``f(v0, t, w)`` for a protocol and reconciliation direction.

    ``direction='best'`` takes the larger of the DR and RR rates at each point.
    """
    from . import oneway, twoway

    direction = Direction(direction)
    table = {
        ("oneway", Direction.DR): oneway.rate_dr_oneway_asym,
        ("oneway", Direction.RR): oneway.rate_rr_oneway_asym,
        ("twoway", Direction.DR): twoway.rate_dr_twoway_asym,
        ("twoway", Direction.RR): twoway.rate_rr_twoway_asym,
    }
    if protocol not in PROTOCOLS:
        raise DomainError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if direction is Direction.BEST:
        dr = table[protocol, Direction.DR]
        rr = table[protocol, Direction.RR]

        def best(v0, t, w):
            return np.maximum(dr(v0, t, w), rr(v0, t, w))

        best.__name__ = f"rate_best_{protocol}_asym"
        return best
    return table[protocol, direction]


def asymptotic_breakdown(protocol: str, direction, v0, t, w, mu) -> RateBreakdown:
    """Leading-order mutual information and Holevo bound at modulation ``mu``.

    The divergent ``log mu`` parts cancel in the rate, which is therefore
    exactly the closed-form asymptotic value.
    """
    from . import oneway, twoway

    direction = Direction(direction)
    if direction is Direction.BEST:
        dr = asymptotic_breakdown(protocol, Direction.DR, v0, t, w, mu)
        rr = asymptotic_breakdown(protocol, Direction.RR, v0, t, w, mu)
        return dr if dr.rate >= rr.rate else rr
    if protocol == "oneway":
        info = 0.5 * np.log2(t * mu / oneway.lambda_fn(v0, w, t))
    elif protocol == "twoway":
        info = 0.5 * np.log2(t * mu / (t * t * v0 + (1 - t * t) * w))
    else:
        raise DomainError(f"unknown protocol {protocol!r}")
    rate = rate_function(protocol, direction)(v0, t, w)
    return RateBreakdown(float(info), float(info - rate), direction)


def numeric_breakdown(protocol: str, direction, v0, t, w, mu) -> RateBreakdown:
    """Finite-modulation rate from explicit covariance matrices."""
    from . import oneway, twoway

    direction = Direction(direction)
    if direction is Direction.BEST:
        dr = numeric_breakdown(protocol, Direction.DR, v0, t, w, mu)
        rr = numeric_breakdown(protocol, Direction.RR, v0, t, w, mu)
        return dr if dr.rate >= rr.rate else rr
    if protocol == "oneway":
        return oneway.rate_oneway_numeric(oneway.OneWayParams(v0=v0, va=mu, t=t, w=w), direction)
    if protocol == "twoway":
        return twoway.rate_twoway_numeric(twoway.TwoWayParams(v0=v0, mu=mu, t=t, w=w), direction)
    raise DomainError(f"unknown protocol {protocol!r}")
