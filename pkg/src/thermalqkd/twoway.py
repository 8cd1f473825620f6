"""Two-way thermal CV-QKD in the ON configuration.

Bob sends a modulated thermal mode (variance ``v0 + mu``) to Alice, who adds
a Gaussian displacement of variance ``mu`` and returns it. Eve attacks each
pass with an independent entangling cloner (transmission ``t``, EPR
variance ``w``) and keeps all four output modes E1' E1'' E2' E2''. Bob's
post-processed variable is ``b = b2 - t*b1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_channel, check_modulation
from .exceptions import DomainError
from .gaussian import (
    IDENTITY,
    PAULI_Z,
    ZERO,
    condition_on_homodyne,
    h_function,
    symplectic_eigenvalues,
    von_neumann_entropy,
)
from .rates import Direction, RateBreakdown


@dataclass(frozen=True)
class TwoWayParams:
    v0: float
    mu: float
    t: float
    w: float

    def __post_init__(self):
        check_channel(self.v0, self.t, self.w)
        check_modulation(self.mu)

    @property
    def vb1(self) -> float:
        """Variance of Bob's forward mode, preparation plus modulation."""
        return self.v0 + self.mu


@dataclass(frozen=True)
class EveCM4Params:
    epsilon: float
    chi: float
    theta: float
    gamma: float
    phi: float

    @classmethod
    def from_params(cls, p: TwoWayParams) -> EveCM4Params:
        t, w, vb1 = p.t, p.w, p.vb1
        root = np.sqrt(w * w - 1)
        return cls(
            epsilon=(1 - t) * vb1 + t * w,
            chi=-np.sqrt(t) * (1 - t) * (w - vb1),
            # E1'' reaches E2' through the E1 arm with amplitude -(1-t), so the
            # cross term carries sqrt(w^2 - 1), not w^2 - 1
            theta=-(1 - t) * root,
            gamma=t * (1 - t) * vb1 + (1 - t + t * t) * w,
            phi=np.sqrt(t) * root,
        )

    def delta(self, t: float, x: float, y: float) -> np.ndarray:
        return self.gamma * IDENTITY + (1 - t) * np.diag([x, y])


def eve_cm_twoway(p: TwoWayParams, delta_x: float, delta_y: float) -> np.ndarray:
    """8x8 covariance matrix of Eve's modes E1' E1'' E2' E2''.

    ``delta_x``/``delta_y`` are Alice's encoding variances in q and p as
    seen by Eve: ``(mu, mu)`` for the unconditioned state, ``(0, mu)`` once
    Alice's variable is known.
    """
    k = EveCM4Params.from_params(p)
    cm = np.block(
        [
            [k.epsilon * IDENTITY, k.phi * PAULI_Z, k.chi * IDENTITY, ZERO],
            [k.phi * PAULI_Z, p.w * IDENTITY, k.theta * PAULI_Z, ZERO],
            [k.chi * IDENTITY, k.theta * PAULI_Z, k.delta(p.t, delta_x, delta_y), k.phi * PAULI_Z],
            [ZERO, ZERO, k.phi * PAULI_Z, p.w * IDENTITY],
        ]
    )
    symplectic_eigenvalues(cm)
    return cm


def bob_output_variance(p: TwoWayParams) -> float:
    """Variance of Bob's post-processed variable ``b = b2 - t*b1``."""
    return p.t**2 * p.v0 + p.t * p.mu + (1 - p.t**2) * p.w


def bob_conditional_variance(p: TwoWayParams) -> float:
    """Variance of Bob's variable given Alice's encoding (the ``mu = 0`` value)."""
    return p.t**2 * p.v0 + (1 - p.t**2) * p.w


def mutual_info_twoway(p: TwoWayParams) -> float:
    return float(0.5 * np.log2(bob_output_variance(p) / bob_conditional_variance(p)))


def rr_conditional_correlations(p: TwoWayParams) -> np.ndarray:
    """8x2 block of correlations between Eve's four modes and Bob's virtual mode B."""
    t, v0, w, va = p.t, p.v0, p.w, p.mu
    s = np.sqrt(t * (1 - t))
    root = np.sqrt(w * w - 1)
    xi1 = -t * np.sqrt(1 - t) * (v0 - w)
    phi1 = s * root
    xi2 = -s * (t * v0 + va) + t * w * s
    phi2 = np.sqrt(1 - t) * root
    return np.vstack([xi1 * IDENTITY, phi1 * PAULI_Z, xi2 * IDENTITY, phi2 * PAULI_Z])


def joint_cm_twoway(p: TwoWayParams) -> np.ndarray:
    """10x10 covariance matrix of Eve's modes plus Bob's virtual mode B (last)."""
    ve = eve_cm_twoway(p, p.mu, p.mu)
    d = rr_conditional_correlations(p)
    return np.block([[ve, d], [d.T, bob_output_variance(p) * IDENTITY]])


def eve_cm_twoway_given_b(p: TwoWayParams) -> np.ndarray:
    """Eve's covariance matrix after Bob's homodyne on B in q."""
    return condition_on_homodyne(joint_cm_twoway(p), [0, 1, 2, 3], 4, "q")


def rate_dr_twoway_asym(v0, t, w):
    """Direct-reconciliation key rate for infinite modulation."""
    check_channel(v0, t, w)
    return 0.5 * np.log2(t * (1 + t) * w / ((1 - t) * (t * t * v0 + (1 - t * t) * w))) - h_function(w)


def rr_conditional_nu2(v0, t, w):
    """Finite symplectic eigenvalue of Eve's state given b, beyond the one at ``w``."""
    num = w * (1 + t * t * v0 * w + t**3 * (1 - v0 * w))
    den = t * t * v0 + w + t**3 * (w - v0)
    return np.sqrt(num / den)


def rate_rr_twoway_asym(v0, t, w):
    """Reverse-reconciliation key rate for infinite modulation."""
    check_channel(v0, t, w)
    num = t * t * v0 + w + t**3 * (w - v0)
    den = (v0 * t * t + (1 - t * t) * w) * (1 - t)
    return 0.5 * np.log2(num / den) + h_function(rr_conditional_nu2(v0, t, w)) - h_function(w)


def rate_twoway_numeric(p: TwoWayParams, direction) -> RateBreakdown:
    """Key rate at finite modulation ``p.mu`` from Eve's explicit covariance matrices."""
    direction = Direction(direction)
    s_e = von_neumann_entropy(eve_cm_twoway(p, p.mu, p.mu))
    if direction is Direction.DR:
        s_cond = von_neumann_entropy(eve_cm_twoway(p, 0.0, p.mu))
    elif direction is Direction.RR:
        s_cond = von_neumann_entropy(eve_cm_twoway_given_b(p))
    else:
        raise DomainError("numeric rates need an explicit direction (dr or rr)")
    return RateBreakdown(mutual_info_twoway(p), s_e - s_cond, direction)
