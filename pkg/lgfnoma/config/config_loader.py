import os
import logging
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.params import SystemParams
from ..utils.error_handling import ConfigError
from ..utils.validators import (
    AccessProbability,
    Placement,
    PositiveCount,
    SchemeKind,
    SweepVariable,
)
from .settings import Settings

logger = logging.getLogger(__name__)

CONFIG_NAME = "lgfnoma.toml"


def _read_toml(path: str, strict: bool = False) -> Optional[Dict[str, Any]]:
    try:
        import tomllib  # Python 3.11+

        with open(path, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError:
        if strict:
            raise ConfigError(f"config file not found: {path}")
        return None
    except Exception as e:
        if strict:
            raise ConfigError(f"failed to parse TOML at {path}: {e}") from e
        logger.warning(f"Failed to parse TOML at {path}: {e}")
        return None


def find_config_path() -> Optional[str]:
    """First existing config file in the search order, if any.

    Search order:
    1) LGF_CONFIG env var (file path)
    2) ./lgfnoma.toml (cwd)
    3) $XDG_CONFIG_HOME/lgfnoma/lgfnoma.toml or ~/.config/lgfnoma/lgfnoma.toml
    """
    env_path = os.getenv("LGF_CONFIG")
    if env_path:
        return env_path

    candidates = [os.path.abspath(os.path.join(os.getcwd(), CONFIG_NAME))]
    xdg = os.getenv("XDG_CONFIG_HOME")
    if xdg:
        candidates.append(os.path.join(xdg, "lgfnoma", CONFIG_NAME))
    candidates.append(os.path.join(os.path.expanduser("~"), ".config", "lgfnoma", CONFIG_NAME))

    for path in candidates:
        if os.path.isfile(path):
            return path
    return None


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Raw TOML mapping; an explicit or LGF_CONFIG path must exist and parse.

    Returns an empty dict when no config is present.
    """
    if path:
        return _read_toml(path, strict=True) or {}
    found = find_config_path()
    if found is None:
        return {}
    explicit = found == os.getenv("LGF_CONFIG")
    cfg = _read_toml(found, strict=explicit)
    if cfg is not None:
        logger.info(f"Loaded config from {found}")
    return cfg or {}


class SchemeSpec(BaseModel):
    """A scheme entry from the config; unset p_E / num_levels are chosen automatically."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SchemeKind
    eab_enabled: bool = False
    p_E: Optional[AccessProbability] = None
    num_levels: Optional[PositiveCount] = None

    @property
    def label(self) -> str:
        if self.kind in ("hybrid-layered", "coordinated-oma"):
            return self.kind
        return f"{self.kind}{'+eab' if self.eab_enabled else ''}"


def default_schemes() -> List[SchemeSpec]:
    return [
        SchemeSpec(kind="hybrid-layered", eab_enabled=True),
        SchemeSpec(kind="random-noma", eab_enabled=True),
        SchemeSpec(kind="random-noma", eab_enabled=False),
        SchemeSpec(kind="grant-free-oma", eab_enabled=False),
        SchemeSpec(kind="coordinated-oma", eab_enabled=False),
    ]


class ExperimentConfig(BaseModel):
    """Fully resolved experiment: scenario, schemes, sweep and run controls."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    system: SystemParams = Field(default_factory=SystemParams)
    schemes: List[SchemeSpec] = Field(default_factory=default_schemes)
    sweep_variable: SweepVariable = "Q"
    sweep_values: Optional[List[float]] = None
    sweep_start: Optional[float] = None
    sweep_stop: Optional[float] = None
    sweep_step: Optional[float] = None
    n_slots: PositiveCount = 10_000
    master_seed: int = Field(default_factory=lambda: Settings.LGF_SEED, ge=0, lt=2**64)
    output_dir: str = Field(default_factory=lambda: Settings.LGF_OUTPUT_DIR)
    grid_step: float = Field(1e-3, gt=0.0, lt=1.0)
    placement: Placement = "balanced"
    mc_search_points: PositiveCount = 10

    @model_validator(mode="after")
    def _check_sweep(self) -> "ExperimentConfig":
        points = self.sweep_points()
        if not points:
            raise ValueError("sweep range is empty")
        if self.sweep_variable in ("Q", "L", "M"):
            if any(p != int(p) for p in points):
                raise ValueError(f"{self.sweep_variable} sweep values must be integers")
            minimum = {"Q": 0, "L": 1, "M": 2}[self.sweep_variable]
            if min(points) < minimum:
                raise ValueError(f"{self.sweep_variable} sweep values must be >= {minimum}")
        elif any(not 0 < p <= 1 for p in points):
            raise ValueError("p_E sweep values must lie in (0, 1]")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        return self

    def sweep_points(self) -> List[float]:
        if self.sweep_values is not None:
            return [float(v) for v in self.sweep_values]
        if self.sweep_start is None or self.sweep_stop is None:
            current = {
                "Q": self.system.num_devices,
                "L": self.system.receiver_max_levels,
                "M": self.system.num_subchannels,
                "p_E": 1.0,
            }
            return [float(current[self.sweep_variable])]
        step = self.sweep_step if self.sweep_step is not None else 1.0
        if step <= 0 or self.sweep_stop < self.sweep_start:
            return []
        # half-step slack keeps the stop value despite float rounding
        values = np.arange(self.sweep_start, self.sweep_stop + step / 2, step)
        return [float(round(v, 12)) for v in values]


def experiment_from_mapping(data: Dict[str, Any], **overrides: Any) -> ExperimentConfig:
    """Build an ExperimentConfig from a TOML mapping plus non-None CLI overrides."""
    payload: Dict[str, Any] = dict(data.get("experiment", {}))
    if "system" in data:
        payload["system"] = data["system"]
    if "schemes" in data:
        payload["schemes"] = data["schemes"]
    payload.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(f"invalid configuration at {where}: {first['msg']}") from e


def load_experiment_config(path: Optional[str] = None, **overrides: Any) -> ExperimentConfig:
    return experiment_from_mapping(load_config(path), **overrides)
