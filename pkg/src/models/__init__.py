"""Models package for the contextual measurement API"""
from .requests import CoinRequest, BornRequest, SternGerlachRequest
from .responses import (
    HealthResponse,
    BeamResponse,
    StepResult,
    CoinResponse,
    CurvePoint,
    CurvesResponse,
    BornResponse,
    SpotResponse,
    CrossingResponse,
    SternGerlachResponse,
)

__all__ = [
    "CoinRequest",
    "BornRequest",
    "SternGerlachRequest",
    "HealthResponse",
    "BeamResponse",
    "StepResult",
    "CoinResponse",
    "CurvePoint",
    "CurvesResponse",
    "BornResponse",
    "SpotResponse",
    "CrossingResponse",
    "SternGerlachResponse",
]
