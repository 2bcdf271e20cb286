"""Classical vs quantum agreement curves handler"""
import numpy as np
from fastapi import APIRouter, Query

from src.coin_game import classical_agreement_curve
from src.models import CurvePoint, CurvesResponse
from src.two_state_postulate import quantum_agreement_curve

router = APIRouter()


@router.get("/curves", response_model=CurvesResponse, tags=["Curves"])
async def curves(angle_count: int = Query(181, ge=2, le=10001, description="Angles over [0, 180] deg")):
    """Probability that a second measurement at angle beta repeats the first"""
    betas = np.radians(np.linspace(0.0, 180.0, angle_count))
    betas[-1] = np.pi
    classical = classical_agreement_curve(betas)
    quantum = quantum_agreement_curve(betas)
    return CurvesResponse(
        points=[
            CurvePoint(beta_deg=float(np.degrees(b)), p_same_classical=pc, p_same_quantum=pq)
            for (b, pc), (_, pq) in zip(classical, quantum)
        ]
    )
