"""Zero-gravity heads-or-tails: clap measurements of a floating coin along arbitrary axes"""
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.errors import AngleRangeError, ProtocolError

UNIT_TOLERANCE = 1e-12
# |c.a| at or below this leaves the coin on its side
TIE_EPSILON = 1e-9

NAMED_AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}

PRESETS: Dict[str, Tuple[str, ...]] = {
    "fig2": ("z",),
    "fig3": ("z", "z"),
    "fig4": ("z", "y"),
    "fig5": ("z", "y", "z"),
}


class CoinMode(str, Enum):
    SPINNING = "Spinning"
    ORIENTED = "Oriented"


class Face(str, Enum):
    HEADS = "Heads"
    TAILS = "Tails"


def _unit(vector: Sequence[float], what: str) -> np.ndarray:
    v = np.asarray(vector, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ProtocolError(f"{what} must be a finite 3-vector, got {vector!r}")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOLERANCE:
        raise ProtocolError(f"{what} must have unit norm, got |v| = {np.linalg.norm(v):.15g}")
    return v


@dataclass(frozen=True)
class CoinState:
    """A spinning coin, or one whose heads face points along `orientation`"""

    mode: CoinMode
    orientation: Optional[Tuple[float, float, float]] = None

    def __post_init__(self):
        if self.mode is CoinMode.SPINNING and self.orientation is not None:
            raise ProtocolError("a spinning coin has no orientation")
        if self.mode is CoinMode.ORIENTED:
            if self.orientation is None:
                raise ProtocolError("an oriented coin needs an orientation")
            object.__setattr__(self, "orientation", tuple(_unit(self.orientation, "orientation")))

    @classmethod
    def spinning(cls) -> "CoinState":
        return cls(CoinMode.SPINNING)

    @classmethod
    def oriented(cls, orientation: Sequence[float]) -> "CoinState":
        return cls(CoinMode.ORIENTED, tuple(float(c) for c in orientation))


@dataclass(frozen=True)
class ClapAxis:
    """Outward normal of the tosser's right palm; that side designates heads"""

    heads_direction: Tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "heads_direction", tuple(_unit(self.heads_direction, "axis")))

    @classmethod
    def parse(cls, spec: Union[str, Sequence[float], "ClapAxis"]) -> "ClapAxis":
        """Accept "x"/"y"/"z" (optionally signed, e.g. "-z"), a 3-vector, or an axis"""
        if isinstance(spec, ClapAxis):
            return spec
        if isinstance(spec, str):
            name = spec.strip().lower()
            sign = -1.0 if name.startswith("-") else 1.0
            name = name.lstrip("+-")
            if name not in NAMED_AXES:
                raise ProtocolError(f"unknown axis name {spec!r}; expected x, y or z")
            return cls(tuple(sign * c for c in NAMED_AXES[name]))
        return cls(tuple(float(c) for c in spec))

    @classmethod
    def at_angle(cls, beta: float) -> "ClapAxis":
        """Axis in the y-z plane rotated by beta from z"""
        return cls((0.0, float(np.sin(beta)), float(np.cos(beta))))

    def angle_to(self, other: "ClapAxis") -> float:
        cos_beta = float(np.dot(self.heads_direction, other.heads_direction))
        return float(np.arccos(np.clip(cos_beta, -1.0, 1.0)))


@dataclass(frozen=True)
class ClapOutcome:
    label: Face
    new_state: CoinState


def clap(state: CoinState, axis: ClapAxis, rng: np.random.Generator) -> ClapOutcome:
    """
    Clap the hands along `axis`: the coin is straightened onto +-axis, never flipped

    A spinning coin, or one lying on its side relative to the axis, lands heads
    or tails with probability 1/2 each.
    """
    a = np.asarray(axis.heads_direction)
    if state.mode is CoinMode.SPINNING:
        heads = bool(rng.random() < 0.5)
    else:
        projection = float(np.dot(state.orientation, a))
        if abs(projection) <= TIE_EPSILON:
            heads = bool(rng.random() < 0.5)
        else:
            heads = projection > 0

    orientation = a if heads else -a
    return ClapOutcome(
        label=Face.HEADS if heads else Face.TAILS,
        new_state=CoinState.oriented(orientation),
    )


@dataclass
class StepFrequency:
    step: int
    angle_to_prev_deg: float
    p_heads: float
    p_agree_prev: float
    p_agree_first: float


@dataclass
class ProtocolResult:
    """Per-step frequencies and joint outcome-sequence counts of a clap protocol"""

    axes: List[ClapAxis]
    trials: int
    seed: int
    steps: List[StepFrequency]
    joint_counts: Dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "step": s.step,
                    "angle_to_prev_deg": s.angle_to_prev_deg,
                    "p_heads": s.p_heads,
                    "p_agree_prev": s.p_agree_prev,
                    "p_agree_first": s.p_agree_first,
                }
                for s in self.steps
            ]
        )


def trial_generators(seed: int, count: int) -> List[np.random.Generator]:
    """Independent per-trial streams derived from (seed, trial index)"""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def run_protocol(
    axes: Sequence[Union[str, Sequence[float], ClapAxis]], trials: int, seed: int
) -> ProtocolResult:
    """
    Run `trials` independent games: a spinning coin clapped successively along `axes`

    Args:
        axes: clap axes in order
        trials: number of games
        seed: root seed; trial i uses the i-th spawned substream

    Returns:
        ProtocolResult with step frequencies and joint counts keyed like "HTH"
    """
    if not axes:
        raise ProtocolError("protocol needs at least one clap axis")
    if int(trials) < 1:
        raise ProtocolError(f"trials must be >= 1, got {trials}")
    clap_axes = [ClapAxis.parse(a) for a in axes]

    labels = np.empty((trials, len(clap_axes)), dtype=bool)
    for i, rng in enumerate(trial_generators(seed, trials)):
        state = CoinState.spinning()
        for j, axis in enumerate(clap_axes):
            outcome = clap(state, axis, rng)
            labels[i, j] = outcome.label is Face.HEADS
            state = outcome.new_state

    steps = []
    for j, axis in enumerate(clap_axes):
        if j == 0:
            angle, agree_prev = float("nan"), float("nan")
        else:
            angle = float(np.degrees(clap_axes[j - 1].angle_to(axis)))
            agree_prev = float(np.mean(labels[:, j] == labels[:, j - 1]))
        steps.append(
            StepFrequency(
                step=j + 1,
                angle_to_prev_deg=angle,
                p_heads=float(np.mean(labels[:, j])),
                p_agree_prev=agree_prev,
                p_agree_first=float(np.mean(labels[:, j] == labels[:, 0])),
            )
        )

    sequences = Counter("".join("H" if h else "T" for h in row) for row in labels)
    return ProtocolResult(
        axes=clap_axes,
        trials=int(trials),
        seed=int(seed),
        steps=steps,
        joint_counts=dict(sorted(sequences.items())),
    )


def check_angle_range(angles: Sequence[float]) -> np.ndarray:
    betas = np.asarray(angles, dtype=float)
    bad = ~np.isfinite(betas) | (betas < 0) | (betas > np.pi)
    if np.any(bad):
        raise AngleRangeError(f"angles must lie in [0, pi], got {betas[bad][0]!r}")
    return betas


def classical_agreement_curve(angles: Sequence[float]) -> List[Tuple[float, float]]:
    """Probability that a second clap at angle beta repeats the first clap's label"""
    betas = check_angle_range(angles)
    cos_beta = np.cos(betas)
    p_same = np.where(np.abs(cos_beta) <= TIE_EPSILON, 0.5, np.where(cos_beta > 0, 1.0, 0.0))
    return [(float(b), float(p)) for b, p in zip(betas, p_same)]
