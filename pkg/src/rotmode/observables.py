"""Occupations, squeezing, symplectic eigenvalue and entanglement entropy.

All quantities refer to an initial product of coherent states. Covariances
do not depend on the coherent amplitudes, so they are computed from the
vacuum expectations ``n_j = sum_k |V_jk|^2`` and ``<a_j^2> = sum_k U_jk V_jk``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, derive_couplings, spectrum
from .propagator import Propagator, cos_kernel, propagator_blocks, sinc_kernel

CLAMP_TOL = 1e-12

CSV_COLUMNS = (
    "t", "n1", "n2", "re_a1sq", "im_a1sq", "re_a2sq", "im_a2sq",
    "rq1", "rp1", "rq2", "rp2", "dq1", "dp1", "dq2", "dp2", "f", "S",
)


class InternalConsistencyError(ArithmeticError):
    """A propagator produced an unphysical second-moment combination."""


@dataclass(frozen=True)
class CoherentInput:
    alpha1: complex = 0j
    alpha2: complex = 0j


@dataclass(frozen=True)
class ObservableSample:
    t: float
    n1: float
    n2: float
    a1sq: complex
    a2sq: complex
    rq1: float
    rp1: float
    rq2: float
    rp2: float
    f: float
    s: float

    @property
    def shifted(self) -> tuple[float, float, float, float]:
        return shifted_ratios((self.rq1, self.rp1, self.rq2, self.rp2))


def _row(j: int) -> int:
    if j not in (1, 2):
        raise ValueError(f"mode index must be 1 or 2, got {j!r}")
    return j - 1


def vacuum_occupation(prop: Propagator, j: int) -> float:
    return float(np.sum(np.abs(prop.v[_row(j)]) ** 2))


def vacuum_occupation_expanded(p: ModelParams, t: float, j: int) -> float:
    """``n_j(t)`` from its expanded closed form in terms of the trig kernels.

    Independent of the propagator blocks; used to cross-check them.
    """
    wj = (p.omega1, p.omega2)[_row(j)]
    spec = spectrum(p)
    if spec.delta == 0.0:
        return 0.0
    d = spec.delta
    diff = p.omega1 - p.omega2
    total = p.omega1 + p.omega2
    kern = {
        nu: (cos_kernel(x, t), sinc_kernel(x, t))
        for nu, x in ((1, spec.omega_plus_sq), (-1, spec.omega_minus_sq))
    }
    mixed = sum(
        (1.0 + nu * diff**2 / (2.0 * d)) * s + 1j * nu * diff * c / d
        for nu, (c, s) in kern.items()
    )
    beat = kern[1][1] - kern[-1][1]
    w_sq = p.omega**2
    prefactor = w_sq * diff**2 / (16.0 * p.omega1 * p.omega2)
    second = w_sq * total**2 * p.omega1 * p.omega2 / (wj**2 * d**2) * beat**2
    return float(prefactor * (abs(mixed) ** 2 + second))


def anomalous_moment(prop: Propagator, j: int) -> complex:
    k = _row(j)
    return complex(np.sum(prop.u[k] * prop.v[k]))


def _ratios_from(n: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    base = 1.0 + 2.0 * n
    rq_sq = base + 2.0 * a.real
    rp_sq = base - 2.0 * a.real
    floor = -CLAMP_TOL * base
    if np.any(rq_sq < floor) or np.any(rp_sq < floor):
        raise InternalConsistencyError("negative quadrature variance ratio")
    return np.sqrt(np.maximum(rq_sq, 0.0)), np.sqrt(np.maximum(rp_sq, 0.0))


def squeezing_ratios(prop: Propagator) -> tuple[float, float, float, float]:
    """``(R_Q1, R_P1, R_Q2, R_P2)`` with ``R^2 = 1 + 2 (n_j +- Re<a_j^2>)``."""
    n = np.sum(np.abs(prop.v) ** 2, axis=1)
    a = np.sum(prop.u * prop.v, axis=1)
    rq, rp = _ratios_from(n, a)
    return float(rq[0]), float(rp[0]), float(rq[1]), float(rp[1])


def shifted_ratios(ratios) -> tuple[float, ...]:
    return tuple(float(r) - 1.0 for r in ratios)


def _symplectic_from(n: np.ndarray, a: np.ndarray) -> np.ndarray:
    rad = (n + 0.5) ** 2 - np.abs(a) ** 2
    if np.any(rad < 0.25 - CLAMP_TOL * (1.0 + (n + 0.5) ** 2)):
        raise InternalConsistencyError("single-mode covariance below the uncertainty bound")
    return np.maximum(np.sqrt(np.maximum(rad, 0.25)) - 0.5, 0.0)


def symplectic_eigenvalue(prop: Propagator, j: int = 1) -> float:
    """``f = sqrt((n_j + 1/2)^2 - |<a_j^2>|^2) - 1/2``, clamped at 0."""
    k = _row(j)
    n = np.sum(np.abs(prop.v[k]) ** 2)
    a = np.sum(prop.u[k] * prop.v[k])
    return float(_symplectic_from(np.asarray(n), np.asarray(a)))


def entanglement_entropy(f):
    """``S = (1 + f) ln(1 + f) - f ln f`` in nats, with ``S(0) = 0``."""
    if np.ndim(f) == 0:
        f = float(f)
        if f < 0.0 or math.isnan(f):
            raise ValueError(f"symplectic eigenvalue must be nonnegative, got {f}")
        if f == 0.0:
            return 0.0
        return (1.0 + f) * math.log1p(f) - f * math.log(f)
    arr = np.asarray(f, dtype=float)
    if np.any(~(arr >= 0.0)):
        raise ValueError("symplectic eigenvalue must be nonnegative")
    out = (1.0 + arr) * np.log1p(arr)
    pos = arr > 0.0
    out[pos] -= arr[pos] * np.log(arr[pos])
    return out


def mean_energy(p: ModelParams, prop: Propagator, state: CoherentInput = CoherentInput()) -> float:
    """``<H>`` in the state evolved from ``|alpha1, alpha2>``, from first and second moments."""
    alpha = np.array([state.alpha1, state.alpha2], dtype=complex)
    u, v = prop.u, prop.v
    m = u @ alpha + v @ alpha.conj()
    # <a_j^dag a_k> and <a_j a_k>
    normal = np.outer(m.conj(), m) + v.conj() @ v.T
    anomalous = np.outer(m, m) + u @ v.T
    c = derive_couplings(p)
    energy = (
        p.omega1 * (normal[0, 0] + 0.5)
        + p.omega2 * (normal[1, 1] + 0.5)
        - 1j * c.lambda_plus * (normal[1, 0] - normal[0, 1])
        - 1j * c.lambda_minus * (anomalous[0, 1] - np.conj(anomalous[1, 0]))
    )
    return float(energy.real)


def series_arrays(p: ModelParams, t_grid) -> dict[str, np.ndarray]:
    """Columnar observables on ``t_grid``, keyed by the CSV column names."""
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if not np.all(np.isfinite(t)):
        raise ValueError("time grid must be finite")
    u, v = propagator_blocks(p, t)
    n = np.sum(np.abs(v) ** 2, axis=2)
    a = np.sum(u * v, axis=2)
    rq, rp = _ratios_from(n, a)
    f = _symplectic_from(n[:, 0], a[:, 0])
    return {
        "t": t,
        "n1": n[:, 0], "n2": n[:, 1],
        "re_a1sq": a[:, 0].real, "im_a1sq": a[:, 0].imag,
        "re_a2sq": a[:, 1].real, "im_a2sq": a[:, 1].imag,
        "rq1": rq[:, 0], "rp1": rp[:, 0], "rq2": rq[:, 1], "rp2": rp[:, 1],
        "dq1": rq[:, 0] - 1.0, "dp1": rp[:, 0] - 1.0,
        "dq2": rq[:, 1] - 1.0, "dp2": rp[:, 1] - 1.0,
        "f": f,
        "S": entanglement_entropy(f),
    }


def sample_series(p: ModelParams, t_grid) -> list[ObservableSample]:
    cols = series_arrays(p, t_grid)
    return [
        ObservableSample(
            t=float(cols["t"][i]),
            n1=float(cols["n1"][i]),
            n2=float(cols["n2"][i]),
            a1sq=complex(cols["re_a1sq"][i], cols["im_a1sq"][i]),
            a2sq=complex(cols["re_a2sq"][i], cols["im_a2sq"][i]),
            rq1=float(cols["rq1"][i]),
            rp1=float(cols["rp1"][i]),
            rq2=float(cols["rq2"][i]),
            rp2=float(cols["rp2"][i]),
            f=float(cols["f"][i]),
            s=float(cols["S"][i]),
        )
        for i in range(cols["t"].size)
    ]


def slow_period(p: ModelParams) -> float:
    """``2 pi / |omega_-|``, or ``2 pi / omega_+`` when ``omega_- = 0``."""
    spec = spectrum(p)
    wm = math.sqrt(abs(spec.omega_minus_sq))
    if wm == 0.0:
        return 2.0 * math.pi / spec.omega_plus
    return 2.0 * math.pi / wm


def default_time_grid(p: ModelParams, points: int = 2048) -> np.ndarray:
    return np.linspace(0.0, slow_period(p), points)
