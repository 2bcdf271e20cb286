"""Stern-Gerlach trajectory ensemble handler"""
from fastapi import APIRouter, HTTPException

import src.dependencies as deps
from src.bohmian_engine import Mixture, PureState, run_ensemble
from src.config import RK4_STEPS, TRAJECTORY_SAMPLE_EVERY
from src.errors import SimulationError
from src.experiment_stats import crossing_check, rectification_report, spot_statistics
from src.models import CrossingResponse, SpotResponse, SternGerlachRequest, SternGerlachResponse
from src.two_state_postulate import BlochAngles

router = APIRouter()


@router.post("/stern-gerlach", response_model=SternGerlachResponse, tags=["Stern-Gerlach"])
def stern_gerlach(request: SternGerlachRequest):
    """
    Integrate an ensemble of Bohmian trajectories to the screen

    - **mixture**: uniform statistical mixture instead of a pure state
    - **theta0_deg / phi0_deg**: pure state on the Bloch sphere
    - **n**: number of trajectories (capped)
    - **seed**: position / mixture seed
    """
    if deps.physical_config is None or deps.beam_params is None:
        raise HTTPException(status_code=503, detail="System not initialized yet")

    try:
        if request.mixture:
            source = Mixture()
        else:
            source = PureState(BlochAngles.from_degrees(request.theta0_deg, request.phi0_deg))
        result = run_ensemble(
            source,
            request.n,
            deps.physical_config,
            request.seed,
            steps=RK4_STEPS,
            sample_every=TRAJECTORY_SAMPLE_EVERY,
            params=deps.beam_params,
        )
        rectification = rectification_report(result.trajectories)
        return SternGerlachResponse(
            source=result.source,
            seed=result.seed,
            spots=SpotResponse(**spot_statistics(result).as_dict()),
            crossing=CrossingResponse(**crossing_check(result.trajectories).as_dict()),
            rectified=rectification.rectified,
            unrectified=len(rectification.unrectified_ids),
            final_z=result.final_z().tolist(),
        )

    except SimulationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Ensemble failed: {str(e)}")
