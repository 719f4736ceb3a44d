"""Approximate occupations and anomalous moments in three limiting regimes.

Near instability only the terms of the exact solution proportional to
``1/omega_-`` are kept; weak coupling keeps order ``omega^2``; short times
keep order ``t^2``. Nothing here enforces the regime of validity:
:func:`approximation_error` measures it against the exact observables.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams, shape_factors, spectrum
from .propagator import propagator_blocks, sinc_kernel

ERROR_FLOOR = 1e-12


class ApproxRegime(str, Enum):
    NEAR_INSTABILITY = "NearInstability"
    WEAK_COUPLING = "WeakCoupling"
    SHORT_TIME = "ShortTime"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ApproxSample:
    t: float
    n1: float
    n2: float
    a1sq: complex
    a2sq: complex
    regime_tag: ApproxRegime


def near_instability(p: ModelParams, t: float) -> ApproxSample:
    """Dominant ``sin^2(omega_- t)/omega_-^2`` terms.

    For ``omega_-^2 < 0`` the envelope continues to ``sinh^2``.
    """
    w1, w2, w = p.omega1, p.omega2, p.omega
    spec = spectrum(p)
    if spec.delta == 0.0 or w == 0.0:
        return ApproxSample(float(t), 0.0, 0.0, 0j, 0j, ApproxRegime.NEAR_INSTABILITY)
    d = spec.delta
    envelope = sinc_kernel(spec.omega_minus_sq, t) ** 2
    minus_term = 1.0 - (w1 - w2) ** 2 / (2.0 * d)
    plus_term = 1.0 - (w1 + w2) ** 2 / (2.0 * d)
    n_pre = w**2 * (w1 - w2) ** 2 / (16.0 * w1 * w2)
    a_pre = w**2 * (w1**2 - w2**2) / (16.0 * w1 * w2)
    sf = shape_factors(p)

    n, a = [], []
    for j, wj in ((1, w1), (2, w2)):
        extra = w**2 * (w1 + w2) ** 2 * w1 * w2 / (wj**2 * d**2)
        n.append(n_pre * (minus_term**2 + extra) * envelope)
        bracket = 2.0 * w1 * w2 * (1.0 - sf.delta(j)) / d - minus_term * plus_term
        a.append((-1) ** j * a_pre * bracket * envelope)
    return ApproxSample(float(t), n[0], n[1], complex(a[0]), complex(a[1]), ApproxRegime.NEAR_INSTABILITY)


def weak_coupling(p: ModelParams, t: float) -> ApproxSample:
    """Order ``omega^2`` expansion; ``n_1 = n_2`` at this order."""
    w1, w2, w = p.omega1, p.omega2, p.omega
    half_sum = 0.5 * (w1 + w2) * t
    n = w**2 * (w1 - w2) ** 2 / (w1 * w2 * (w1 + w2) ** 2) * math.sin(half_sum) ** 2
    if w1 == w2:
        return ApproxSample(float(t), n, n, 0j, 0j, ApproxRegime.WEAK_COUPLING)
    beat = math.sin(0.5 * (w1 - w2) * t) / (w1 - w2)
    carrier = math.sin(half_sum) / (w1 + w2)
    a = []
    for j, wj in ((1, w1), (2, w2)):
        pre = 1j * (-1) ** (j + 1) * w**2 * (w1**2 - w2**2) / (2.0 * w1 * w2 * wj)
        a.append(pre * cmath.exp(-1j * half_sum) * (cmath.exp(-1j * wj * t) * beat - carrier))
    return ApproxSample(float(t), n, n, a[0], a[1], ApproxRegime.WEAK_COUPLING)


def short_time(p: ModelParams, t: float) -> ApproxSample:
    """Leading ``t^2`` behaviour; ``<a_1^2> = -<a_2^2>`` is real."""
    w1, w2, w = p.omega1, p.omega2, p.omega
    n = w**2 * (w1 - w2) ** 2 * t * t / (4.0 * w1 * w2)
    a1 = w**2 * (w1**2 - w2**2) * t * t / (4.0 * w1 * w2)
    return ApproxSample(float(t), n, n, complex(a1), complex(-a1), ApproxRegime.SHORT_TIME)


_APPROXIMATIONS = {
    ApproxRegime.NEAR_INSTABILITY: near_instability,
    ApproxRegime.WEAK_COUPLING: weak_coupling,
    ApproxRegime.SHORT_TIME: short_time,
}


def approximate(p: ModelParams, t: float, regime_tag: ApproxRegime | str) -> ApproxSample:
    return _APPROXIMATIONS[ApproxRegime(regime_tag)](p, t)


def comparison_table(p: ModelParams, t_grid, regime_tag: ApproxRegime | str) -> dict[str, np.ndarray]:
    """Exact and approximate ``n_j``, ``<a_j^2>`` on a grid, keyed by quantity.

    Each value is an array of shape ``(len(t_grid), 2)``: exact, approximate.
    """
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    u, v = propagator_blocks(p, t)
    n = np.sum(np.abs(v) ** 2, axis=2)
    a = np.sum(u * v, axis=2)
    approx = [approximate(p, float(ti), regime_tag) for ti in t]
    return {
        "n1": np.column_stack([n[:, 0], [s.n1 for s in approx]]),
        "n2": np.column_stack([n[:, 1], [s.n2 for s in approx]]),
        "a1sq": np.column_stack([a[:, 0], [s.a1sq for s in approx]]),
        "a2sq": np.column_stack([a[:, 1], [s.a2sq for s in approx]]),
    }


def deviations(p: ModelParams, t_grid, regime_tag: ApproxRegime | str) -> dict[str, float]:
    """Per-quantity ``max_t |approx - exact| / max(max_t |exact|, 1e-12)``."""
    table = comparison_table(p, t_grid, regime_tag)
    out = {}
    for name, cols in table.items():
        scale = max(float(np.max(np.abs(cols[:, 0]), initial=0.0)), ERROR_FLOOR)
        out[name] = float(np.max(np.abs(cols[:, 1] - cols[:, 0]), initial=0.0)) / scale
    return out


def approximation_error(p: ModelParams, t_grid, regime_tag: ApproxRegime | str) -> float:
    """Largest normalized deviation of the approximation over ``n_j`` and ``<a_j^2>``.

    Deviations are normalized by the largest exact magnitude on the grid,
    since pointwise ratios are meaningless where ``sin^2`` vanishes.
    """
    if np.size(t_grid) == 0:
        raise ValueError("time grid must be nonempty")
    return max(deviations(p, t_grid, regime_tag).values())
