"""Configuration module for the contextual measurement simulator"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Physical configuration (JSON file, built-in defaults when unset)
PHYSICAL_CONFIG_PATH = os.getenv("PHYSICAL_CONFIG_PATH") or None

# Run outputs
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "runs")
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "0"))

# Trajectory integration
RK4_STEPS = int(os.getenv("RK4_STEPS", "4000"))
TRAJECTORY_SAMPLE_EVERY = int(os.getenv("TRAJECTORY_SAMPLE_EVERY", "20"))
CROSSING_SCAN_LIMIT = int(os.getenv("CROSSING_SCAN_LIMIT", "1000"))

# Pauli grid oracle
GRID_NODES = int(os.getenv("GRID_NODES", "256"))
GRID_BOX_SIGMAS = float(os.getenv("GRID_BOX_SIGMAS", "12"))
GRID_STEPS = int(os.getenv("GRID_STEPS", "2000"))

# API Configuration
API_HOST = os.getenv("API_HOST", "0.0.0.0")
API_PORT = int(os.getenv("API_PORT", "8000"))
API_MAX_ENSEMBLE = int(os.getenv("API_MAX_ENSEMBLE", "2000"))
CORS_ORIGINS = [
    o.strip()
    for o in os.getenv("CORS_ORIGINS", "http://localhost:3000,http://localhost:5173").split(",")
    if o.strip()
]
