"""Physical parameters, derived couplings and dynamical regime.

Units are hbar = m = 1. The two oscillator frequencies obey
``omega1 >= omega2 > 0`` and the rotation frequency ``omega >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

REGIME_TOL = 1e-12


class ParameterError(ValueError):
    """Raised when model parameters are outside the physical domain."""


class DegenerateSpectrumError(ValueError):
    """Raised when the spectral gap vanishes (omega = 0 and omega1 = omega2)."""


class Regime(str, Enum):
    FREE = "Free"
    STABLE_I = "StableI"
    STABLE_II = "StableII"
    UNSTABLE = "Unstable"
    CRITICAL = "Critical"
    LANDAU = "Landau"

    def __str__(self) -> str:
        return self.value

    @property
    def bounded(self) -> bool:
        return self in (Regime.FREE, Regime.STABLE_I, Regime.STABLE_II, Regime.LANDAU)


@dataclass(frozen=True)
class ModelParams:
    """Oscillator frequencies ``omega1``, ``omega2`` and rotation frequency ``omega``."""

    omega1: float
    omega2: float
    omega: float

    def __post_init__(self) -> None:
        for name in ("omega1", "omega2", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.omega2 <= 0.0:
            raise ParameterError(f"omega2 must be positive, got {self.omega2}")
        if self.omega1 < self.omega2:
            raise ParameterError(
                f"omega1 >= omega2 is required, got omega1={self.omega1}, omega2={self.omega2}"
            )
        if self.omega < 0.0:
            raise ParameterError(f"omega must be nonnegative, got {self.omega}")

    @property
    def isotropic(self) -> bool:
        return self.omega1 == self.omega2


@dataclass(frozen=True)
class Couplings:
    lambda_plus: float
    lambda_minus: float


@dataclass(frozen=True)
class Spectrum:
    """Spectral data of the coupled system.

    ``omega_minus_sq`` is negative in the unstable regime, so the squared
    eigenfrequencies are stored rather than the frequencies themselves.
    """

    delta: float
    omega_plus_sq: float
    omega_minus_sq: float
    regime: Regime
    isotropic: bool

    @property
    def omega_plus(self) -> float:
        return math.sqrt(self.omega_plus_sq)

    @property
    def omega_minus(self) -> complex | float:
        """Real ``sqrt(omega_minus_sq)``, or ``1j*|omega_minus|`` when unstable."""
        if self.omega_minus_sq >= 0.0:
            return math.sqrt(self.omega_minus_sq)
        return 1j * math.sqrt(-self.omega_minus_sq)


@dataclass(frozen=True)
class ModeShapeFactors:
    gamma1: float
    gamma2: float
    delta1: float
    delta2: float

    def gamma(self, j: int) -> float:
        return (self.gamma1, self.gamma2)[_mode_index(j)]

    def delta(self, j: int) -> float:
        return (self.delta1, self.delta2)[_mode_index(j)]


def _mode_index(j: int) -> int:
    if j not in (1, 2):
        raise ValueError(f"mode index must be 1 or 2, got {j!r}")
    return j - 1


def derive_couplings(p: ModelParams) -> Couplings:
    """Couplings ``lambda_pm = omega (omega1 +- omega2) / (2 sqrt(omega1 omega2))``."""
    scale = p.omega / (2.0 * math.sqrt(p.omega1 * p.omega2))
    return Couplings(scale * (p.omega1 + p.omega2), scale * (p.omega1 - p.omega2))


def spectral_gap(p: ModelParams) -> float:
    w1sq, w2sq = p.omega1**2, p.omega2**2
    # hypot keeps the coupling term from underflowing at tiny omega
    return math.hypot(0.5 * (w1sq - w2sq), p.omega * math.sqrt(2.0 * (w1sq + w2sq)))


def classify_regime(p: ModelParams, tol: float = REGIME_TOL) -> Regime:
    """Dynamical regime from the sign of ``(omega - omega1)(omega - omega2)``.

    Boundaries are matched within ``tol * omega1``.
    """
    eps = tol * p.omega1
    if p.omega <= eps:
        return Regime.FREE
    near1 = abs(p.omega - p.omega1) <= eps
    near2 = abs(p.omega - p.omega2) <= eps
    if near1 and near2 and abs(p.omega1 - p.omega2) <= eps:
        return Regime.LANDAU
    if near1 or near2:
        return Regime.CRITICAL
    if p.omega < p.omega2:
        return Regime.STABLE_I
    if p.omega > p.omega1:
        return Regime.STABLE_II
    return Regime.UNSTABLE


def eigenfrequencies_sq(
    omega1: float, omega2: float, lambda_plus: float, lambda_minus: float
) -> tuple[float, float]:
    """``omega_pm^2`` for arbitrary couplings, not only those of a rotating frame."""
    total = omega1 + omega2
    gap_sq = lambda_plus**2 * total**2 + (omega1 - omega2) ** 2 * (0.25 * total**2 - lambda_minus**2)
    gap = math.sqrt(gap_sq)
    mean = lambda_plus**2 - lambda_minus**2 + 0.5 * (omega1**2 + omega2**2)
    return mean + gap, mean - gap


def spectrum(p: ModelParams, tol: float = REGIME_TOL) -> Spectrum:
    """Spectral gap, squared eigenfrequencies and regime.

    The small root is obtained from the product
    ``omega_plus^2 omega_minus^2 = (omega^2 - omega1^2)(omega^2 - omega2^2)``,
    which keeps full relative accuracy close to the critical lines where
    ``omega_minus^2 -> 0``.
    """
    delta = spectral_gap(p)
    mean = p.omega**2 + 0.5 * (p.omega1**2 + p.omega2**2)
    wp_sq = mean + delta
    wm_sq = (p.omega**2 - p.omega1**2) * (p.omega**2 - p.omega2**2) / wp_sq
    return Spectrum(delta, wp_sq, wm_sq, classify_regime(p, tol), p.isotropic)


def shape_factors(p: ModelParams) -> ModeShapeFactors:
    delta = spectral_gap(p)
    if delta == 0.0:
        raise DegenerateSpectrumError("spectral gap vanishes for omega = 0 and omega1 = omega2")
    g1 = (p.omega1**2 - p.omega2**2) / (2.0 * delta)
    total = p.omega1**2 + p.omega2**2
    w_sq = p.omega**2

    def _delta(gamma: float, wj: float) -> float:
        return gamma + w_sq * (2.0 * wj**2 + total) / (2.0 * delta * wj**2)

    return ModeShapeFactors(g1, -g1, _delta(g1, p.omega1), _delta(-g1, p.omega2))


def from_magnetic_trap(
    charge: float,
    field_magnitude: float,
    mass: float,
    light_speed: float,
    k1: float,
    k2: float,
) -> ModelParams:
    """Parameters for a charged particle in a planar harmonic trap and a uniform field.

    ``omega = e B / (2 m c)`` and ``omega_j^2 = K_j / m + omega^2``.
    """
    if mass <= 0.0:
        raise ParameterError(f"mass must be positive, got {mass}")
    if light_speed <= 0.0:
        raise ParameterError(f"light_speed must be positive, got {light_speed}")
    if k1 < k2:
        raise ParameterError(f"k1 >= k2 is required, got k1={k1}, k2={k2}")
    omega = abs(charge * field_magnitude) / (2.0 * mass * light_speed)
    w1_sq = k1 / mass + omega**2
    w2_sq = k2 / mass + omega**2
    if w2_sq <= 0.0:
        raise ParameterError("trap constants give a nonpositive oscillator frequency")
    return ModelParams(math.sqrt(w1_sq), math.sqrt(w2_sq), omega)
