"""Argument checks shared by the rate modules."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError


def check_channel(v0, t, w) -> None:
    """Raise DomainError unless v0 >= 1, w >= 1 and 0 < t < 1 (element-wise)."""
    v0, t, w = (np.asarray(x, dtype=float) for x in (v0, t, w))
    if np.any(np.isnan(v0)) or np.any(v0 < 1):
        raise DomainError(f"preparation noise v0 must be >= 1, got {v0}")
    if np.any(np.isnan(w)) or np.any(w < 1):
        raise DomainError(f"cloner variance w must be >= 1, got {w}")
    if np.any(np.isnan(t)) or np.any(t <= 0) or np.any(t >= 1):
        raise DomainError(f"transmission t must lie in (0, 1), got {t}")


def check_modulation(mu) -> None:
    mu = np.asarray(mu, dtype=float)
    if np.any(np.isnan(mu)) or np.any(mu <= 0) or np.any(~np.isfinite(mu)):
        raise DomainError(f"modulation variance must be finite and > 0, got {mu}")
