"""Impact classification at the screen, spot statistics and trajectory-geometry checks"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import PacketsNotSeparatedError, TimeGridMismatchError
from src.pauli_dynamics import lobe_components
from src.physical_config import DerivedBeamParams, PhysicalConfig

if TYPE_CHECKING:
    from src.bohmian_engine import Trajectory

MIN_SEPARATION_SIGMAS = 3.0
Z_SCORE_LIMIT = 4.0


class ImpactLabel(str, Enum):
    """Spot on the screen; Up is the +hbar/2 eigenvalue of S_z"""

    UP = "Up"
    DOWN = "Down"


@dataclass(frozen=True)
class ImpactClassification:
    label: ImpactLabel
    tie: bool = False


def separation_sigmas(params: DerivedBeamParams, config: PhysicalConfig) -> float:
    """Lobe centre distance from the axis at the screen, in units of sigma0"""
    return params.screen_offset / config.sigma0


def check_separation(params: DerivedBeamParams, config: PhysicalConfig) -> None:
    separation = separation_sigmas(params, config)
    if separation < MIN_SEPARATION_SIGMAS:
        raise PacketsNotSeparatedError(
            f"lobes are {separation:.3f} sigma0 from the axis at the screen, "
            f"need >= {MIN_SEPARATION_SIGMAS:g}; spot classification is meaningless"
        )


def classify_impact(
    z_screen: float, params: DerivedBeamParams, config: PhysicalConfig
) -> ImpactClassification:
    """Up above the axis, Down below; an impact exactly on the axis counts Up and is flagged"""
    check_separation(params, config)
    if z_screen == 0:
        return ImpactClassification(ImpactLabel.UP, tie=True)
    return ImpactClassification(ImpactLabel.UP if z_screen > 0 else ImpactLabel.DOWN)


def classify_impacts(
    z_screen: np.ndarray, params: DerivedBeamParams, config: PhysicalConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized classify_impact: (is_up, is_tie) boolean arrays"""
    check_separation(params, config)
    z_screen = np.asarray(z_screen, dtype=float)
    return z_screen >= 0, z_screen == 0


@dataclass
class EnsembleResult:
    """Trajectories of one ensemble and its spot counts N+ / N-"""

    trajectories: List["Trajectory"]
    n_up: int
    n_down: int
    source: Dict[str, object]
    seed: int
    born_expected: Optional[float] = None
    ties: int = 0

    @property
    def n(self) -> int:
        return self.n_up + self.n_down

    @property
    def fraction_up(self) -> float:
        return self.n_up / self.n if self.n else float("nan")

    def final_z(self) -> np.ndarray:
        return np.array([tr.z[-1] for tr in self.trajectories])


@dataclass(frozen=True)
class SpotSummary:
    n: int
    n_up: int
    n_down: int
    fraction_up: float
    fraction_down: float
    binomial_stderr: float
    expected: Optional[float] = None
    z_score: Optional[float] = None
    degenerate: bool = False

    @property
    def verdict(self) -> Optional[str]:
        if self.z_score is None:
            return None
        return "PASS" if abs(self.z_score) <= Z_SCORE_LIMIT else "FAIL"

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "n_up": self.n_up,
            "n_down": self.n_down,
            "fraction_up": self.fraction_up,
            "fraction_down": self.fraction_down,
            "binomial_stderr": self.binomial_stderr,
            "expected": self.expected,
            "z_score": self.z_score,
            "degenerate_stderr": self.degenerate,
            "verdict": self.verdict,
        }


def spot_statistics(results: EnsembleResult, expected: Optional[float] = None) -> SpotSummary:
    """
    Spot fractions with binomial error and the z-score against the Born expectation

    Args:
        results: ensemble outcome
        expected: reference P(Up); defaults to results.born_expected

    Returns:
        SpotSummary; the z-score uses the binomial error of the expected probability
    """
    n = results.n
    if n < 1:
        raise ValueError("spot statistics need at least one impact")
    fraction_up = results.n_up / n
    stderr = float(np.sqrt(fraction_up * (1 - fraction_up) / n))
    reference = results.born_expected if expected is None else expected

    z_score = None
    if reference is not None:
        reference_stderr = np.sqrt(reference * (1 - reference) / n)
        if reference_stderr > 0:
            z_score = float((fraction_up - reference) / reference_stderr)
        else:
            z_score = 0.0 if fraction_up == reference else float("inf")

    return SpotSummary(
        n=n,
        n_up=results.n_up,
        n_down=results.n_down,
        fraction_up=fraction_up,
        fraction_down=1 - fraction_up,
        binomial_stderr=stderr,
        expected=reference,
        z_score=z_score,
        degenerate=n == 1 or stderr == 0,
    )


@dataclass(frozen=True)
class CrossingReport:
    pairs_checked: int
    crossings: int
    pure_state_violation: bool

    def as_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "crossings": self.crossings,
            "pure_state_violation": self.pure_state_violation,
        }


def crossing_check(trajectories: Sequence["Trajectory"]) -> CrossingReport:
    """Count z-order sign changes between every pair across consecutive shared samples"""
    if not trajectories:
        return CrossingReport(0, 0, False)
    reference = trajectories[0].t
    for tr in trajectories[1:]:
        if tr.t.shape != reference.shape or not np.array_equal(tr.t, reference):
            raise TimeGridMismatchError(
                f"trajectory {tr.traj_id} does not share the sample times of trajectory "
                f"{trajectories[0].traj_id}"
            )

    z = np.stack([tr.z for tr in trajectories])
    n = len(trajectories)
    crossings = 0
    for i in range(n - 1):
        signs = np.sign(z[i] - z[i + 1 :])
        crossings += int(np.count_nonzero(signs[:, :-1] * signs[:, 1:] < 0))

    pure = all(tr.angles == trajectories[0].angles for tr in trajectories)
    return CrossingReport(
        pairs_checked=n * (n - 1) // 2,
        crossings=crossings,
        pure_state_violation=pure and crossings > 0,
    )


@dataclass
class RectificationReport:
    """Final spin polar angle against the pole matching each label"""

    tolerance: float
    rectified: int
    unrectified_ids: List[int] = field(default_factory=list)
    unrectified_z: List[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "rectified": self.rectified,
            "unrectified": len(self.unrectified_ids),
            "unrectified_ids": self.unrectified_ids,
            "unrectified_z": self.unrectified_z,
        }


def rectification_report(trajectories: Sequence["Trajectory"], tolerance: float = 0.05) -> RectificationReport:
    """Up impacts need theta < tolerance, Down impacts theta > pi - tolerance"""
    report = RectificationReport(tolerance=tolerance, rectified=0)
    for tr in trajectories:
        theta = float(tr.theta_spin[-1])
        up = tr.z[-1] >= 0
        ok = theta < tolerance if up else theta > np.pi - tolerance
        if ok:
            report.rectified += 1
        else:
            report.unrectified_ids.append(tr.traj_id)
            report.unrectified_z.append(float(tr.z[-1]))
    return report


def quantization_report(
    trajectories: Sequence["Trajectory"], config: PhysicalConfig, params: DerivedBeamParams
) -> Dict[str, float]:
    """
    Weight of the opposite spinor component at each impact

    For an Up impact this is |Psi-|^2 / rho, for Down |Psi+|^2 / rho; near zero
    means the local spinor is an eigenvector of sigma_z.
    """
    fractions = []
    for tr in trajectories:
        center = params.lobe_center(float(tr.t[-1]))
        plus, minus = lobe_components(
            tr.x[-1],
            tr.z[-1],
            center,
            tr.angles.amplitude_plus,
            tr.angles.amplitude_minus,
            config.sigma0,
            0.0,
            0.0,
            0.0,
        )
        rho_plus, rho_minus = abs(plus) ** 2, abs(minus) ** 2
        opposite = rho_minus if tr.z[-1] >= 0 else rho_plus
        fractions.append(opposite / (rho_plus + rho_minus))
    values = np.asarray(fractions) if fractions else np.array([np.nan])
    return {
        "max_opposite_fraction": float(np.max(values)),
        "median_opposite_fraction": float(np.median(values)),
    }


def density_histogram_check(
    z_final: np.ndarray,
    density: Callable[[np.ndarray], np.ndarray],
    bins: int = 30,
    span: Optional[float] = None,
) -> float:
    """Largest |histogram - density| over bins, relative to the density peak"""
    z_final = np.asarray(z_final, dtype=float)
    if span is None:
        span = float(np.max(np.abs(z_final)))
    counts, edges = np.histogram(z_final, bins=bins, range=(-span, span), density=False)
    widths = np.diff(edges)
    empirical = counts / (z_final.size * widths)
    centers = 0.5 * (edges[:-1] + edges[1:])
    analytic = density(centers)
    return float(np.max(np.abs(empirical - analytic)) / np.max(analytic))
