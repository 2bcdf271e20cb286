"""CSV / JSON writers and the run manifest"""
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from src import __version__
from src.physical_config import PhysicalConfig

# 17 significant digits, scientific
FLOAT_FORMAT = "%.16e"

PathLike = Union[str, Path]


class RunManifest(BaseModel):
    """Everything needed to re-run a command and reproduce its data files"""

    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    config_path: Optional[str] = None
    out_dir: str
    tool_version: str = __version__
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def save(self, out_dir: PathLike) -> Path:
        return write_json(Path(out_dir) / "manifest.json", self.model_dump())


def _prepare(path: PathLike) -> Path:
    output_file = Path(path)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    return output_file


def _plain(value: Any) -> Any:
    """numpy scalars / arrays to JSON-native values; non-finite floats to null"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_csv(path: PathLike, frame: pd.DataFrame) -> Path:
    output_file = _prepare(path)
    frame.to_csv(output_file, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
    return output_file


def write_json(path: PathLike, data: Any) -> Path:
    output_file = _prepare(path)
    with open(output_file, "w", encoding="utf-8", newline="\n") as f:
        json.dump(_plain(data), f, indent=2, ensure_ascii=False)
        f.write("\n")
    return output_file


def trajectory_frame(trajectories: Sequence, config: PhysicalConfig) -> pd.DataFrame:
    """Long table traj_id, t, y, x, z, vz, theta_spin; y = v_beam * t"""
    if not trajectories:
        return pd.DataFrame(columns=["traj_id", "t", "y", "x", "z", "vz", "theta_spin"])
    return pd.concat(
        [
            pd.DataFrame(
                {
                    "traj_id": np.full(tr.t.shape, tr.traj_id, dtype=int),
                    "t": tr.t,
                    "y": config.v_beam * tr.t,
                    "x": tr.x,
                    "z": tr.z,
                    "vz": tr.vz,
                    "theta_spin": tr.theta_spin,
                }
            )
            for tr in trajectories
        ],
        ignore_index=True,
    )


def curves_frame(classical: List[tuple], quantum: List[tuple]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "beta_deg": [np.degrees(beta) for beta, _ in classical],
            "p_same_classical": [p for _, p in classical],
            "p_same_quantum": [p for _, p in quantum],
        }
    )


def impact_frame(trajectories: Sequence) -> pd.DataFrame:
    """One row per particle: entrance position, screen z, spot and final spin polar angle"""
    return pd.DataFrame(
        {
            "traj_id": [tr.traj_id for tr in trajectories],
            "x0": [tr.entry[0] for tr in trajectories],
            "z0": [tr.entry[1] for tr in trajectories],
            "z_screen": [tr.z[-1] for tr in trajectories],
            "label": [tr.label for tr in trajectories],
            "theta_spin": [tr.theta_spin[-1] for tr in trajectories],
        }
    )
