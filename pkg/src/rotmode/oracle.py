"""Numerical ground truth by direct integration of the coefficient equations.

Nothing here uses the closed-form propagator: ``i dW/dt = H W`` is stepped
with classical fixed-step RK4 from ``W(0) = I``, where ``H`` is the 4x4
generator acting on ``(a1, a2, a1^dagger, a2^dagger)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ModelParams, derive_couplings, spectrum
from .propagator import Propagator

METRIC = np.diag([1.0, 1.0, -1.0, -1.0])
MAX_STEP_PHASE = 0.1


class StepSizeError(ValueError):
    """Raised when ``dt`` violates ``dt > 0`` and ``dt * omega_+ <= 0.1``."""


def generator(p: ModelParams) -> np.ndarray:
    """The non-Hermitian 4x4 generator ``H`` with ``M H^dag M = H``."""
    c = derive_couplings(p)
    lp, lm = 1j * c.lambda_plus, 1j * c.lambda_minus
    return np.array(
        [
            [p.omega1, lp, 0.0, lm],
            [-lp, p.omega2, lm, 0.0],
            [0.0, lm, -p.omega1, lp],
            [lm, 0.0, -lp, -p.omega2],
        ],
        dtype=complex,
    )


def default_dt(p: ModelParams) -> float:
    return min(1e-3, 0.01 / spectrum(p).omega_plus)


def _check_dt(p: ModelParams, dt: float) -> None:
    if not dt > 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    wp = spectrum(p).omega_plus
    if dt * wp > MAX_STEP_PHASE * (1.0 + 1e-12):
        raise StepSizeError(f"dt * omega_+ = {dt * wp:.3g} exceeds {MAX_STEP_PHASE}")


def integrate_series(p: ModelParams, times, dt: float | None = None) -> np.ndarray:
    """Full 4x4 propagators on an ascending, nonnegative time grid.

    Returns an array of shape ``(len(times), 4, 4)``. One integration pass
    covers the whole grid.
    """
    dt = default_dt(p) if dt is None else float(dt)
    _check_dt(p, dt)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.size and (t[0] < 0.0 or np.any(np.diff(t) < 0.0)):
        raise ValueError("times must be nonnegative and sorted ascending")
    return kernels.rk4_grid(generator(p), t, dt)


def integrate_propagator(p: ModelParams, t: float, dt: float | None = None) -> Propagator:
    w = integrate_series(p, [t], dt)[0]
    return Propagator(float(t), w[:2, :2].copy(), w[:2, 2:].copy())


def as_propagators(times, full: np.ndarray) -> list[Propagator]:
    return [Propagator(float(t), w[:2, :2].copy(), w[:2, 2:].copy()) for t, w in zip(times, full)]


@dataclass(frozen=True, eq=False)
class MomentState:
    """First and symmetrized second moments of ``A = (a1, a2, a1^dag, a2^dag)``.

    ``second[i, k] = <A_i A_k + A_k A_i> / 2``.
    """

    t: float
    mean: np.ndarray
    second: np.ndarray

    @property
    def covariance(self) -> np.ndarray:
        return self.second - np.outer(self.mean, self.mean)

    def covariance_occupation(self, j: int) -> float:
        """``<a_j^dag a_j> - |<a_j>|^2``."""
        k = _index(j)
        return float(self.covariance[k + 2, k].real - 0.5)

    def anomalous_covariance(self, j: int) -> complex:
        """``<a_j^2> - <a_j>^2``."""
        k = _index(j)
        return complex(self.covariance[k, k])


def _index(j: int) -> int:
    if j not in (1, 2):
        raise ValueError(f"mode index must be 1 or 2, got {j!r}")
    return j - 1


def coherent_moments(alpha1: complex, alpha2: complex) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and symmetrized second moments of ``|alpha1, alpha2>``."""
    mean = np.array([alpha1, alpha2, np.conj(alpha1), np.conj(alpha2)], dtype=complex)
    vacuum = 0.5 * np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    return mean, np.outer(mean, mean) + vacuum


def evolve_moments_series(
    p: ModelParams, alpha1: complex, alpha2: complex, times, dt: float | None = None
) -> list[MomentState]:
    """Moments on a time grid via ``mean -> W mean`` and ``second -> W second W^T``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    mean0, second0 = coherent_moments(alpha1, alpha2)
    order = np.argsort(t, kind="stable")
    full = np.empty((t.size, 4, 4), dtype=complex)
    full[order] = integrate_series(p, t[order], dt)
    return [
        MomentState(float(ti), w @ mean0, w @ second0 @ w.T) for ti, w in zip(t, full)
    ]


def evolve_moments(
    p: ModelParams, alpha1: complex, alpha2: complex, t: float, dt: float | None = None
) -> MomentState:
    return evolve_moments_series(p, alpha1, alpha2, [t], dt)[0]
