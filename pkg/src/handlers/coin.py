"""Coin-clap protocol handler"""
import math

from fastapi import APIRouter, HTTPException

from src.coin_game import PRESETS, run_protocol
from src.errors import SimulationError
from src.models import CoinRequest, CoinResponse, StepResult

router = APIRouter()


def _finite(value: float):
    return None if math.isnan(value) else value


@router.post("/coin", response_model=CoinResponse, tags=["Coin"])
async def coin(request: CoinRequest):
    """
    Clap a spinning coin along successive axes

    - **preset**: fig2, fig3, fig4 or fig5
    - **axes**: explicit axis list instead of a preset
    - **trials**: number of games
    - **seed**: root seed
    """
    if request.preset is not None and request.preset not in PRESETS:
        raise HTTPException(status_code=400, detail=f"Unknown preset: {request.preset}")

    try:
        axes = PRESETS[request.preset] if request.preset else request.axes
        result = run_protocol(axes, request.trials, request.seed)
        return CoinResponse(
            trials=result.trials,
            seed=result.seed,
            steps=[
                StepResult(
                    step=s.step,
                    angle_to_prev_deg=_finite(s.angle_to_prev_deg),
                    p_heads=s.p_heads,
                    p_agree_prev=_finite(s.p_agree_prev),
                    p_agree_first=s.p_agree_first,
                )
                for s in result.steps
            ],
            joint_counts=result.joint_counts,
        )

    except SimulationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Coin protocol failed: {str(e)}")
