"""One-way thermal CV-QKD against an entangling-cloner attack.

Alice Gaussian-modulates a thermal state (variance ``v0``) with variance
``va``; Bob homodynes. Eve mixes the signal on a beam splitter of
transmission ``t`` with one arm of an EPR state of variance ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_channel, check_modulation
from .exceptions import DomainError
from .gaussian import IDENTITY, PAULI_Z, condition_on_homodyne, h_function, von_neumann_entropy
from .rates import Direction, RateBreakdown


@dataclass(frozen=True)
class OneWayParams:
    v0: float
    va: float
    t: float
    w: float

    def __post_init__(self):
        check_channel(self.v0, self.t, self.w)
        check_modulation(self.va)


def lambda_fn(x, y, t):
    """Beam-splitter average ``t*x + (1-t)*y``."""
    return t * x + (1 - t) * y


def excess_noise_from_w(w, t):
    """Channel excess noise referred to the input, ``(w-1)(1-t)/t``."""
    if np.any(np.asarray(w) < 1):
        raise DomainError(f"w must be >= 1, got {w}")
    if np.any(np.asarray(t) <= 0) or np.any(np.asarray(t) >= 1):
        raise DomainError(f"t must lie in (0, 1), got {t}")
    return (w - 1) * (1 - t) / t


def w_from_excess_noise(n, t):
    """Inverse of :func:`excess_noise_from_w`."""
    if np.any(np.asarray(n) < 0):
        raise DomainError(f"excess noise must be >= 0, got {n}")
    if np.any(np.asarray(t) <= 0) or np.any(np.asarray(t) >= 1):
        raise DomainError(f"t must lie in (0, 1), got {t}")
    return 1 + n * t / (1 - t)


def eve_cm_oneway(p: OneWayParams, *, known_q: bool = False) -> np.ndarray:
    """Covariance matrix of Eve's kept mode E'' and output mode E'.

    With ``known_q=True`` Alice's encoding is removed from the q quadrature
    of E', giving Eve's state conditioned on Alice's variable.
    """
    out_var = p.t * p.w + (1 - p.t) * (p.va + p.v0)
    lower = out_var * IDENTITY
    if known_q:
        lower = lower - np.diag([(1 - p.t) * p.va, 0.0])
    c = np.sqrt(p.t * (p.w * p.w - 1))
    return np.block([[p.w * IDENTITY, c * PAULI_Z], [c * PAULI_Z, lower]])


def joint_cm_oneway(p: OneWayParams) -> np.ndarray:
    """Joint covariance matrix of Eve's modes (E'', E') and Bob's mode B."""
    ve = eve_cm_oneway(p)
    b = (lambda_fn(p.v0, p.w, p.t) + p.t * p.va) * IDENTITY
    c = np.vstack(
        [
            np.sqrt((1 - p.t) * (p.w * p.w - 1)) * PAULI_Z,
            np.sqrt(p.t * (1 - p.t)) * (p.w - (p.va + p.v0)) * IDENTITY,
        ]
    )
    return np.block([[ve, c], [c.T, b]])


def mutual_info_oneway(p: OneWayParams) -> float:
    return float(0.5 * np.log2(1 + p.t * p.va / lambda_fn(p.v0, p.w, p.t)))


def rate_dr_oneway_asym(v0, t, w):
    """Direct-reconciliation key rate for infinite modulation."""
    check_channel(v0, t, w)
    lw = lambda_fn(w, v0, t)
    lv = lambda_fn(v0, w, t)
    nu = np.sqrt(w * lambda_fn(1, w * v0, t) / lw)
    return 0.5 * np.log2(t * lw / ((1 - t) * lv)) + h_function(nu) - h_function(w)


def rate_rr_oneway_asym(v0, t, w):
    """Reverse-reconciliation key rate for infinite modulation."""
    check_channel(v0, t, w)
    return 0.5 * np.log2(w / ((1 - t) * lambda_fn(v0, w, t))) - h_function(w)


def rate_oneway_numeric(p: OneWayParams, direction) -> RateBreakdown:
    """Key rate at finite modulation ``p.va`` from Eve's explicit covariance matrices."""
    direction = Direction(direction)
    s_e = von_neumann_entropy(eve_cm_oneway(p))
    if direction is Direction.DR:
        s_cond = von_neumann_entropy(eve_cm_oneway(p, known_q=True))
    elif direction is Direction.RR:
        s_cond = von_neumann_entropy(condition_on_homodyne(joint_cm_oneway(p), [0, 1], 2, "q"))
    else:
        raise DomainError("numeric rates need an explicit direction (dr or rr)")
    return RateBreakdown(mutual_info_oneway(p), s_e - s_cond, direction)
