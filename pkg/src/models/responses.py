"""Response models for the contextual measurement API"""
import math

from pydantic import BaseModel, field_validator
from typing import Dict, List, Optional


class HealthResponse(BaseModel):
    """Health check response model"""
    status: str
    message: str
    config_source: str
    screen_separation_sigmas: float


class BeamResponse(BaseModel):
    """Derived beam parameters"""
    dt_field: float
    z_delta: float
    u: float
    t_screen: float
    screen_offset: float


class StepResult(BaseModel):
    """Frequencies at one clap"""
    step: int
    angle_to_prev_deg: Optional[float]
    p_heads: float
    p_agree_prev: Optional[float]
    p_agree_first: float


class CoinResponse(BaseModel):
    """Clap protocol response model"""
    trials: int
    seed: int
    steps: List[StepResult]
    joint_counts: Dict[str, int]


class CurvePoint(BaseModel):
    beta_deg: float
    p_same_classical: float
    p_same_quantum: float


class CurvesResponse(BaseModel):
    points: List[CurvePoint]


class BornResponse(BaseModel):
    """Born prediction response model"""
    theta0: float
    phi0: float
    p_up: float
    p_down: float
    mixture_p_up: float
    mixture_estimate: Optional[float] = None


class SpotResponse(BaseModel):
    n: int
    n_up: int
    n_down: int
    fraction_up: float
    fraction_down: float
    binomial_stderr: float
    expected: Optional[float]
    z_score: Optional[float]
    degenerate_stderr: bool
    verdict: Optional[str]

    @field_validator("expected", "z_score", mode="before")
    @classmethod
    def _finite_or_none(cls, value):
        # JSON has no infinity; a degenerate stderr yields one
        if value is not None and not math.isfinite(value):
            return None
        return value


class CrossingResponse(BaseModel):
    pairs_checked: int
    crossings: int
    pure_state_violation: bool


class SternGerlachResponse(BaseModel):
    """Trajectory ensemble response model"""
    source: Dict[str, object]
    seed: int
    spots: SpotResponse
    crossing: CrossingResponse
    rectified: int
    unrectified: int
    final_z: List[float]
