"""Gaussian-state algebra in shot-noise units.

Covariance matrices are plain ``numpy`` arrays of shape ``(2N, 2N)`` with
quadratures ordered ``(q1, p1, q2, p2, ...)``; the vacuum is the identity.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .exceptions import DomainError, NumericError, PhysicalityError, SingularityError

SYMMETRY_ATOL = 1e-9
PHYSICALITY_TOL = 1e-9
PAIRING_RTOL = 1e-6
SINGULAR_VARIANCE = 1e-12

IDENTITY = np.eye(2)
PAULI_Z = np.diag([1.0, -1.0])
ZERO = np.zeros((2, 2))


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in (q1, p1, ...) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def h_function(x):
    """Entropy in bits of a single-mode thermal state with symplectic eigenvalue ``x``.

    h(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2).

    Accepts scalars or arrays. Values within ``1e-9`` below 1 are treated
    as 1; anything smaller raises :class:`DomainError`.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 1.0 - PHYSICALITY_TOL) or np.any(np.isnan(arr)):
        raise DomainError(f"h(x) requires x >= 1, got {x!r}")
    arr = np.maximum(arr, 1.0)
    plus = (arr + 1.0) / 2.0
    minus = (arr - 1.0) / 2.0
    # rewritten as log2(plus) + minus*log2(1 + 1/minus): the two large terms
    # of the textbook form cancel catastrophically for big x.
    # minus*log(minus) -> 0 as x -> 1
    tiny = arr - 1.0 < 1e-12
    safe = np.where(tiny, 1.0, minus)
    out = np.log2(plus) + np.where(tiny, 0.0, safe * np.log1p(1.0 / safe) / np.log(2.0))
    if out.ndim == 0:
        return float(out)
    return out


def check_cm(cm: np.ndarray) -> np.ndarray:
    """Validate the shape and symmetry of a covariance matrix and return it as floats."""
    cm = np.asarray(cm, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] % 2:
        raise PhysicalityError(f"covariance matrix must be 2N x 2N, got shape {cm.shape}")
    if not np.all(np.isfinite(cm)):
        raise PhysicalityError("covariance matrix has non-finite entries")
    if np.max(np.abs(cm - cm.T)) > SYMMETRY_ATOL:
        raise PhysicalityError("covariance matrix is not symmetric")
    return cm


def epr_cm(w: float) -> np.ndarray:
    """Two-mode squeezed vacuum of variance ``w`` (two vacua at ``w = 1``)."""
    if w < 1:
        raise DomainError(f"EPR variance must be >= 1, got {w}")
    c = np.sqrt(w * w - 1.0)
    return np.block([[w * IDENTITY, c * PAULI_Z], [c * PAULI_Z, w * IDENTITY]])


def thermal_cm(v: float) -> np.ndarray:
    """Single-mode thermal state of quadrature variance ``v``."""
    if v < 1:
        raise DomainError(f"thermal variance must be >= 1, got {v}")
    return v * IDENTITY.copy()


def symplectic_eigenvalues(cm: np.ndarray) -> np.ndarray:
    """Sorted symplectic spectrum of ``cm``.

    Computed from the moduli of the eigenvalues of ``Omega @ cm``, which come
    in ``±i nu`` pairs. Values in ``[1 - 1e-9, 1)`` are clipped to 1.
    """
    cm = check_cm(cm)
    n = cm.shape[0] // 2
    try:
        moduli = np.sort(np.abs(np.linalg.eigvals(omega(n) @ cm)))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc

    first, second = moduli[0::2], moduli[1::2]
    scale = np.maximum(np.maximum(first, second), 1.0)
    if np.any(np.abs(first - second) > PAIRING_RTOL * scale):
        raise NumericError(f"eigenvalue moduli do not pair up: {moduli}")
    nu = 0.5 * (first + second)

    if np.any(nu < 1.0 - PHYSICALITY_TOL):
        raise PhysicalityError(f"symplectic eigenvalue below 1: {nu.min():.12g}")
    return np.maximum(nu, 1.0)


def von_neumann_entropy(cm: np.ndarray) -> float:
    """Entropy in bits of the Gaussian state with covariance matrix ``cm``."""
    return float(np.sum(h_function(symplectic_eigenvalues(cm))))


def _mode_indices(modes: Sequence[int]) -> np.ndarray:
    return np.array([2 * m + k for m in modes for k in (0, 1)], dtype=int)


def condition_on_homodyne(
    joint: np.ndarray,
    kept_modes: Sequence[int],
    measured_mode: int,
    quadrature: str = "q",
) -> np.ndarray:
    """Covariance matrix of ``kept_modes`` after homodyning ``measured_mode``.

    Implements ``A - C (Pi B Pi)^+ C^T`` where ``B`` is the measured block,
    ``C`` the cross-correlations and ``Pi`` projects on the measured
    quadrature. Modes of ``joint`` not listed are traced out.
    """
    joint = check_cm(joint)
    n = joint.shape[0] // 2
    kept_modes = list(kept_modes)
    if measured_mode in kept_modes:
        raise DomainError("the measured mode cannot also be kept")
    if not all(0 <= m < n for m in [*kept_modes, measured_mode]):
        raise DomainError(f"mode index out of range for a {n}-mode state")
    if quadrature not in ("q", "p"):
        raise DomainError(f"quadrature must be 'q' or 'p', got {quadrature!r}")

    kept = _mode_indices(kept_modes)
    meas = _mode_indices([measured_mode])
    a = joint[np.ix_(kept, kept)]
    b = joint[np.ix_(meas, meas)]
    c = joint[np.ix_(kept, meas)]

    k = 0 if quadrature == "q" else 1
    var = b[k, k]
    if var <= SINGULAR_VARIANCE:
        raise SingularityError(f"measured quadrature variance {var} is not positive")
    pinv = np.zeros((2, 2))
    pinv[k, k] = 1.0 / var

    out = a - c @ pinv @ c.T
    out = 0.5 * (out + out.T)
    symplectic_eigenvalues(out)
    return out
