"""Handlers package for the contextual measurement API"""
from fastapi import APIRouter

from .health import router as health_router
from .coin import router as coin_router
from .curves import router as curves_router
from .born import router as born_router
from .stern_gerlach import router as stern_gerlach_router

# Create main router
router = APIRouter()

# Include all sub-routers
router.include_router(health_router)
router.include_router(coin_router)
router.include_router(curves_router)
router.include_router(born_router)
router.include_router(stern_gerlach_router)

__all__ = ["router"]
