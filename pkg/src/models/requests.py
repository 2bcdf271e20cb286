"""Request models for the contextual measurement API"""
from pydantic import BaseModel, Field, model_validator
from typing import List, Optional, Union

from src.config import API_MAX_ENSEMBLE


class CoinRequest(BaseModel):
    """Clap protocol request model"""
    preset: Optional[str] = Field(None, description="Built-in sequence: fig2, fig3, fig4, fig5")
    axes: Optional[List[Union[str, List[float]]]] = Field(
        None, description="Clap axes: 'x'/'y'/'z' (optionally signed) or unit 3-vectors"
    )
    trials: int = Field(10000, ge=1, le=1_000_000, description="Number of games")
    seed: int = Field(0, ge=0, description="Root seed")

    @model_validator(mode="after")
    def one_protocol(self):
        if (self.preset is None) == (self.axes is None):
            raise ValueError("give exactly one of preset or axes")
        return self


class BornRequest(BaseModel):
    """Born prediction request model"""
    theta0_deg: float = Field(..., ge=0, le=180, description="Polar angle of the state, degrees")
    phi0_deg: float = Field(0.0, ge=0, lt=360, description="Azimuth of the state, degrees")
    mixture_samples: Optional[int] = Field(
        None, ge=1, le=10_000_000, description="Monte Carlo draws for the mixture estimate"
    )
    seed: int = Field(0, ge=0)


class SternGerlachRequest(BaseModel):
    """Trajectory ensemble request model"""
    mixture: bool = Field(False, description="Draw theta0, phi0 uniformly per particle")
    theta0_deg: float = Field(90.0, ge=0, le=180, description="Pure state polar angle, degrees")
    phi0_deg: float = Field(0.0, ge=0, lt=360, description="Pure state azimuth, degrees")
    n: int = Field(100, ge=1, le=API_MAX_ENSEMBLE, description=f"Trajectories (1-{API_MAX_ENSEMBLE})")
    seed: int = Field(0, ge=0)
