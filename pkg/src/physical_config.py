"""Physical constants of the Stern-Gerlach set-up and the derived beam parameters"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.errors import ConfigError

# Bohr magneton, J/T, stored as a literal rather than e*hbar/(2*m_e)
MU_BOHR = 9.274e-24
HBAR = 1.054571817e-34


class PhysicalConfig(BaseModel):
    """Experimental constants in SI units for a silver-atom beam, one magnet and a screen"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mass: float = Field(1.8e-25, gt=0, description="Silver atom mass, kg")
    hbar: float = Field(HBAR, gt=0, description="Reduced Planck constant, J.s")
    mu_bohr: float = Field(MU_BOHR, gt=0, description="Bohr magneton, J/T")
    b0: float = Field(5.0, gt=0, description="Uniform field component B0, T")
    b0_grad: float = Field(1e3, ge=0, description="Field gradient B'0, T/m")
    sigma0: float = Field(1e-4, gt=0, description="Initial wavepacket standard deviation, m")
    magnet_length: float = Field(1e-2, gt=0, description="Magnet length, m")
    free_path: float = Field(0.2, gt=0, description="Free flight from magnet exit to screen, m")
    v_beam: float = Field(500.0, gt=0, description="Classical propagation speed v_y, m/s")
    phi_plus: float = Field(0.0, allow_inf_nan=False, description="Constant phase of the + lobe")
    phi_minus: float = Field(0.0, allow_inf_nan=False, description="Constant phase of the - lobe")


@dataclass(frozen=True)
class DerivedBeamParams:
    """Field-crossing time, lobe offset and lobe speed acquired in the magnet"""

    dt_field: float
    z_delta: float
    u: float
    t_screen: float

    @property
    def screen_offset(self) -> float:
        """Lobe centre distance from the axis at the screen, z_delta + u * t_screen"""
        return self.z_delta + self.u * self.t_screen

    def lobe_center(self, t: float) -> float:
        """Centre of the + lobe at time t after field exit"""
        return self.z_delta + self.u * t


def config_from_mapping(data: Mapping[str, Any]) -> PhysicalConfig:
    """
    Build a validated config from a flat mapping; missing fields take the built-in defaults

    Raises:
        ConfigError: naming the first offending field
    """
    try:
        return PhysicalConfig(**dict(data))
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "config"
        raise ConfigError(field, error["msg"]) from e


def load_config(path: Optional[Union[str, Path]] = None) -> PhysicalConfig:
    """
    Load a flat JSON object of SI values

    Args:
        path: JSON file path; None returns the built-in defaults

    Returns:
        Validated PhysicalConfig
    """
    if path is None:
        return PhysicalConfig()

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"invalid JSON ({e.msg} at line {e.lineno})") from e
    except OSError as e:
        raise ConfigError(str(path), f"cannot read config file ({e.strerror})") from e

    if not isinstance(data, dict):
        raise ConfigError(str(path), "expected a JSON object")
    return config_from_mapping(data)


def derive_beam_params(config: PhysicalConfig) -> DerivedBeamParams:
    """Crossing time, offset z_delta and speed u of the lobes leaving the magnet"""
    for name in ("mass", "mu_bohr", "magnet_length", "free_path", "v_beam"):
        if not getattr(config, name) > 0:
            raise ConfigError(name, "must be strictly positive")
    if config.b0_grad < 0:
        raise ConfigError("b0_grad", "must be non-negative")

    dt_field = config.magnet_length / config.v_beam
    force = config.mu_bohr * config.b0_grad
    u = force * dt_field / config.mass
    z_delta = force * dt_field**2 / (2 * config.mass)

    return DerivedBeamParams(
        dt_field=dt_field,
        z_delta=z_delta,
        u=u,
        t_screen=config.free_path / config.v_beam,
    )
