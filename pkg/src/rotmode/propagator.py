"""Closed-form Bogoliubov propagator ``a(t) = U(t) a + V(t) a^dagger``.

Every occurrence of ``cos(omega_- t)`` and ``sin(omega_- t)/omega_-`` goes
through analytically continued kernels that are entire in ``omega_-^2``, so
one code path covers the stable, unstable and critical regimes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ModelParams, derive_couplings, spectrum

SERIES_THRESHOLD = 1e-4
_SERIES_TERMS = 8


@dataclass(frozen=True, eq=False)
class Propagator:
    """The 2x2 blocks ``u = U(t)`` and ``v = V(t)`` at time ``t``."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def full(self) -> np.ndarray:
        """The 4x4 matrix ``[[U, V], [V*, U*]]`` acting on ``(a, a^dagger)``."""
        return np.block([[self.u, self.v], [self.v.conj(), self.u.conj()]])

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "u_re": self.u.real.tolist(),
            "u_im": self.u.imag.tolist(),
            "v_re": self.v.real.tolist(),
            "v_im": self.v.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Propagator:
        parts = {k: np.array(data[k], dtype=float) for k in ("u_re", "u_im", "v_re", "v_im")}
        if any(a.shape != (2, 2) for a in parts.values()):
            raise ValueError("propagator blocks must be 2x2")
        u = parts["u_re"] + 1j * parts["u_im"]
        v = parts["v_re"] + 1j * parts["v_im"]
        return cls(float(data["t"]), u, v)

    def to_json(self) -> str:
        # repr-based float output round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Propagator:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TrigKernels:
    c_plus: float
    c_minus: float
    s_plus: float
    s_minus: float


def _series(y: float, t: float) -> tuple[float, float]:
    c = s = 0.0
    for k in range(_SERIES_TERMS - 1, -1, -1):
        c = c * -y + 1.0 / math.factorial(2 * k)
        s = s * -y + 1.0 / math.factorial(2 * k + 1)
    return c, s * t


def cos_kernel(x: float, t: float) -> float:
    """``cos(sqrt(x) t)`` continued to ``cosh(sqrt(-x) t)`` for ``x < 0``."""
    y = x * t * t
    if abs(y) < SERIES_THRESHOLD:
        return _series(y, t)[0]
    if x > 0.0:
        return math.cos(math.sqrt(x) * t)
    return math.cosh(math.sqrt(-x) * t)


def sinc_kernel(x: float, t: float) -> float:
    """``sin(sqrt(x) t)/sqrt(x)``; ``sinh(sqrt(-x) t)/sqrt(-x)`` for ``x < 0`` and ``t`` at ``x = 0``.

    A truncated Taylor series in ``x t^2`` is used when ``|x t^2| < 1e-4``.
    """
    y = x * t * t
    if abs(y) < SERIES_THRESHOLD:
        return _series(y, t)[1]
    if x > 0.0:
        r = math.sqrt(x)
        return math.sin(r * t) / r
    r = math.sqrt(-x)
    return math.sinh(r * t) / r


def trig_kernels(p: ModelParams, t: float) -> TrigKernels:
    spec = spectrum(p)
    return TrigKernels(
        cos_kernel(spec.omega_plus_sq, t),
        cos_kernel(spec.omega_minus_sq, t),
        sinc_kernel(spec.omega_plus_sq, t),
        sinc_kernel(spec.omega_minus_sq, t),
    )


def propagator_blocks(p: ModelParams, times) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``U``, ``V`` of shape ``(n, 2, 2)`` on the time grid ``times``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1:
        raise ValueError("times must be a 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ValueError("times must be finite")
    spec = spectrum(p)
    return kernels.propagator_grid(
        p.omega1, p.omega2, p.omega, spec.delta, spec.omega_plus_sq, spec.omega_minus_sq, t
    )


def propagator(p: ModelParams, t: float) -> Propagator:
    u, v = propagator_blocks(p, [t])
    return Propagator(float(t), u[0], v[0])


def propagator_series(p: ModelParams, times) -> list[Propagator]:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    u, v = propagator_blocks(p, t)
    return [Propagator(float(ti), ui, vi) for ti, ui, vi in zip(t, u, v)]


def symplectic_defect(prop: Propagator) -> float:
    """Max deviation of ``U U^dag - V V^dag = I`` and ``U V^T - V U^T = 0``."""
    u, v = prop.u, prop.v
    comm = u @ u.conj().T - v @ v.conj().T - np.eye(2)
    anti = u @ v.T - v @ u.T
    return float(max(np.abs(comm).max(), np.abs(anti).max()))


def characteristic_residual(p: ModelParams) -> tuple[float, float]:
    """Residuals of ``x^2 - A x + B`` at ``x = omega_+^2`` and ``x = omega_-^2``.

    ``A`` and ``B`` are the coefficients of the decoupled fourth-order
    equation satisfied by each field operator, written with the couplings.
    """
    c = derive_couplings(p)
    a = p.omega1**2 + p.omega2**2 + 2.0 * (c.lambda_plus**2 - c.lambda_minus**2)
    root = p.omega1 * p.omega2
    b = ((c.lambda_plus + c.lambda_minus) ** 2 - root) * ((c.lambda_plus - c.lambda_minus) ** 2 - root)
    spec = spectrum(p)
    return (
        abs(spec.omega_plus_sq**2 - a * spec.omega_plus_sq + b),
        abs(spec.omega_minus_sq**2 - a * spec.omega_minus_sq + b),
    )
