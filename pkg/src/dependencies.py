"""Dependency holder for the contextual measurement API"""
from typing import Optional

from src.config import PHYSICAL_CONFIG_PATH
from src.physical_config import DerivedBeamParams, PhysicalConfig, derive_beam_params, load_config

# Global instances
physical_config: Optional[PhysicalConfig] = None
beam_params: Optional[DerivedBeamParams] = None


def init_dependencies(config_path: Optional[str] = None):
    """Load the physical configuration and derive the beam parameters on startup"""
    global physical_config, beam_params

    physical_config = load_config(config_path or PHYSICAL_CONFIG_PATH)
    beam_params = derive_beam_params(physical_config)

    return physical_config, beam_params


def get_physical_config() -> PhysicalConfig:
    """Get loaded physical configuration"""
    if physical_config is None:
        raise RuntimeError("Physical configuration not initialized")
    return physical_config


def get_beam_params() -> DerivedBeamParams:
    """Get derived beam parameters"""
    if beam_params is None:
        raise RuntimeError("Beam parameters not initialized")
    return beam_params
