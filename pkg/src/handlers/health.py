"""Health and info handlers for the contextual measurement API"""
from fastapi import APIRouter, HTTPException

from src.config import PHYSICAL_CONFIG_PATH
import src.dependencies as deps
from src.experiment_stats import separation_sigmas
from src.models import BeamResponse, HealthResponse

router = APIRouter()


@router.get("/", tags=["Root"])
async def root():
    """Root endpoint"""
    return {
        "message": "Welcome to the contextual measurement simulator API",
        "docs": "/docs",
        "health": "/health"
    }


@router.get("/health", response_model=HealthResponse, tags=["Health"])
async def health_check():
    """Health check endpoint"""
    if deps.physical_config is None or deps.beam_params is None:
        raise HTTPException(status_code=503, detail="System not initialized yet")

    try:
        return HealthResponse(
            status="healthy",
            message="System running normally",
            config_source=PHYSICAL_CONFIG_PATH or "defaults",
            screen_separation_sigmas=separation_sigmas(deps.beam_params, deps.physical_config),
        )

    except Exception as e:
        raise HTTPException(status_code=503, detail=f"Health check failed: {str(e)}")


@router.get("/beam", response_model=BeamResponse, tags=["Beam"])
async def beam():
    """Derived beam parameters of the loaded configuration"""
    if deps.beam_params is None:
        raise HTTPException(status_code=503, detail="System not initialized yet")

    params = deps.beam_params
    return BeamResponse(
        dt_field=params.dt_field,
        z_delta=params.z_delta,
        u=params.u,
        t_screen=params.t_screen,
        screen_offset=params.screen_offset,
    )
