"""Measurement-postulate predictions for a spin-1/2 state"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.coin_game import check_angle_range
from src.errors import AngleRangeError

# (1/pi) * integral_0^pi cos^2(theta/2) d theta
MIXTURE_UP_PROBABILITY = 0.5


@dataclass(frozen=True)
class BlochAngles:
    """Polar angles of a pure spin state on the Bloch sphere"""

    theta0: float
    phi0: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta0 <= np.pi):
            raise AngleRangeError(f"theta0 must lie in [0, pi], got {self.theta0!r}")
        if not (0.0 <= self.phi0 < 2 * np.pi):
            raise AngleRangeError(f"phi0 must lie in [0, 2 pi), got {self.phi0!r}")

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> "BlochAngles":
        return cls(float(np.radians(theta_deg)), float(np.radians(phi_deg)))

    @property
    def amplitude_plus(self) -> float:
        return float(np.cos(self.theta0 / 2))

    @property
    def amplitude_minus(self) -> float:
        return float(np.sin(self.theta0 / 2))


def born_up_probability(angles: BlochAngles) -> float:
    """Probability of +hbar/2 along z, cos^2(theta0/2); independent of phi0"""
    return float(np.cos(angles.theta0 / 2) ** 2)


def born_down_probability(angles: BlochAngles) -> float:
    return 1.0 - born_up_probability(angles)


def mixture_up_probability(
    theta_samples: int,
    rng: np.random.Generator,
    thetas: Optional[Sequence[float]] = None,
) -> float:
    """
    Monte Carlo average of cos^2(theta0/2) over theta0 uniform on [0, pi]

    Args:
        theta_samples: number of draws
        rng: random stream
        thetas: explicit theta0 values replacing the draws

    Returns:
        Estimated probability of +hbar/2; MIXTURE_UP_PROBABILITY is the exact value
    """
    if thetas is None:
        if int(theta_samples) < 1:
            raise ValueError(f"theta_samples must be >= 1, got {theta_samples}")
        values = rng.uniform(0.0, np.pi, size=int(theta_samples))
    else:
        values = check_angle_range(thetas)
        if values.size < 1:
            raise ValueError("thetas must not be empty")
    return float(np.mean(np.cos(values / 2) ** 2))


def quantum_agreement_curve(angles: Sequence[float]) -> List[Tuple[float, float]]:
    """Probability cos^2(beta/2) that an apparatus rotated by beta repeats the first result"""
    betas = check_angle_range(angles)
    return [(float(b), float(np.cos(b / 2) ** 2)) for b in betas]
