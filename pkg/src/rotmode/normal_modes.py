"""Canonical transformation to the decoupled form ``H = sum_j (alpha_j P'_j^2 + beta_j Q'_j^2)/2``.

With ``P'_j = P_j + gamma Q_{3-j}`` and ``Q'_j = (Q_j - eta P_{3-j})/(1 + eta gamma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams, Regime, spectral_gap, spectrum


class DegenerateTransformationError(ValueError):
    """omega = 0: the modes are already decoupled and gamma is singular."""


class NotApplicableError(ValueError):
    """No standard normal representation outside the dynamically stable regimes."""


class EnergeticSignature(str, Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    INDEFINITE_STABLE = "IndefiniteStable"
    UNSTABLE = "Unstable"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NormalModeDecomposition:
    gamma: float
    eta: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    omega_nm_plus: float
    omega_nm_minus: float

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "eta": self.eta,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "omega_nm_plus": self.omega_nm_plus,
            "omega_nm_minus": self.omega_nm_minus,
        }


def decompose(p: ModelParams) -> NormalModeDecomposition:
    """Coefficients of the decoupled form.

    ``omega_nm_minus`` is ``sqrt(|alpha2 beta2|)``, which equals ``|omega_-|``
    in every regime (the product is negative only when unstable).
    """
    if p.omega == 0.0:
        raise DegenerateTransformationError("omega = 0: modes are already decoupled")
    w = p.omega
    d = spectral_gap(p)
    # (2 d - omega1^2 + omega2^2) / (4 w), rationalized to avoid cancellation at small w
    total = p.omega1**2 + p.omega2**2
    denom = 2.0 * d + (p.omega1**2 - p.omega2**2)
    gamma = 2.0 * w * total / denom
    eta = 2.0 * gamma / total
    alpha1 = 1.0 - (w / d) * (gamma - w)
    alpha2 = 1.0 - (w / d) * (gamma + w)
    # d * gamma / w in closed form; d / w alone overflows at tiny w
    d_gamma_w = 2.0 * d * total / denom
    beta1 = d_gamma_w + d
    beta2 = d_gamma_w - d
    return NormalModeDecomposition(
        gamma,
        eta,
        alpha1,
        alpha2,
        beta1,
        beta2,
        math.sqrt(max(alpha1 * beta1, 0.0)),
        math.sqrt(abs(alpha2 * beta2)),
    )


def transformation_matrix(p: ModelParams) -> np.ndarray:
    """Matrix ``T`` with ``(Q'_1, Q'_2, P'_1, P'_2) = T (Q_1, Q_2, P_1, P_2)``."""
    nm = decompose(p)
    norm = 1.0 / (1.0 + nm.eta * nm.gamma)
    t = np.zeros((4, 4))
    t[0, 0] = t[1, 1] = norm
    t[0, 3] = t[1, 2] = -nm.eta * norm
    t[2, 2] = t[3, 3] = 1.0
    t[2, 1] = t[3, 0] = nm.gamma
    return t


def hamiltonian_matrix(p: ModelParams) -> np.ndarray:
    """Symmetric ``K`` with ``H = x^T K x / 2`` for ``x = (Q_1, Q_2, P_1, P_2)``, m = 1."""
    w = p.omega
    return np.array(
        [
            [p.omega1**2, 0.0, 0.0, -w],
            [0.0, p.omega2**2, w, 0.0],
            [0.0, w, 1.0, 0.0],
            [-w, 0.0, 0.0, 1.0],
        ]
    )


def reconstructed_hamiltonian(p: ModelParams) -> np.ndarray:
    """``T^T diag(beta1, beta2, alpha1, alpha2) T``; equals :func:`hamiltonian_matrix`."""
    nm = decompose(p)
    t = transformation_matrix(p)
    return t.T @ np.diag([nm.beta1, nm.beta2, nm.alpha1, nm.alpha2]) @ t


def hamiltonian_signature(p: ModelParams) -> EnergeticSignature:
    regime = spectrum(p).regime
    if regime in (Regime.STABLE_I, Regime.FREE):
        return EnergeticSignature.POSITIVE_DEFINITE
    if regime is Regime.STABLE_II:
        return EnergeticSignature.INDEFINITE_STABLE
    raise NotApplicableError(f"no normal representation in the {regime} regime")
