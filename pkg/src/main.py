"""FastAPI application: contextual measurement simulator API - Entrypoint"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src import __version__
from src.config import API_HOST, API_PORT, CORS_ORIGINS, PHYSICAL_CONFIG_PATH
from src.dependencies import init_dependencies
from src.experiment_stats import MIN_SEPARATION_SIGMAS, separation_sigmas
from src.handlers import router

# Create FastAPI application
app = FastAPI(
    title="Contextual Spin API",
    description="Coin-clap game, Born predictions and Bohmian Stern-Gerlach ensembles",
    version=__version__
)

# Setup CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(router)


# Lifecycle events
@app.on_event("startup")
async def startup_event():
    """Load the physical configuration on application startup"""
    print("🚀 Initializing contextual measurement simulator...")

    config, params = init_dependencies()
    print(f"✓ Physical configuration loaded from {PHYSICAL_CONFIG_PATH or 'defaults'}")
    print(f"  z_delta={params.z_delta:.3e} m, u={params.u:.3f} m/s, t_screen={params.t_screen:.3e} s")

    separation = separation_sigmas(params, config)
    if separation < MIN_SEPARATION_SIGMAS:
        print(f"⚠ Lobes only {separation:.2f} sigma0 apart at the screen; ensembles will be rejected")

    print("✓ System startup complete!")


@app.on_event("shutdown")
async def shutdown_event():
    """Cleanup on application shutdown"""
    print("👋 Shutting down system...")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "src.main:app",
        host=API_HOST,
        port=API_PORT,
        reload=True
    )
