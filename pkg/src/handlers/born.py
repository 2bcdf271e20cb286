"""Born prediction handler"""
import numpy as np
from fastapi import APIRouter, HTTPException

from src.errors import SimulationError
from src.models import BornRequest, BornResponse
from src.two_state_postulate import (
    MIXTURE_UP_PROBABILITY,
    BlochAngles,
    born_down_probability,
    born_up_probability,
    mixture_up_probability,
)

router = APIRouter()


@router.post("/born", response_model=BornResponse, tags=["Born"])
async def born(request: BornRequest):
    """Up/Down probabilities of a pure state along z, and of the uniform mixture"""
    try:
        angles = BlochAngles.from_degrees(request.theta0_deg, request.phi0_deg)
        estimate = None
        if request.mixture_samples is not None:
            estimate = mixture_up_probability(request.mixture_samples, np.random.default_rng(request.seed))
        return BornResponse(
            theta0=angles.theta0,
            phi0=angles.phi0,
            p_up=born_up_probability(angles),
            p_down=born_down_probability(angles),
            mixture_p_up=MIXTURE_UP_PROBABILITY,
            mixture_estimate=estimate,
        )

    except SimulationError as e:
        raise HTTPException(status_code=400, detail=str(e))
