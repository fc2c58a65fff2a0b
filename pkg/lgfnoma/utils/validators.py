"""Reusable pydantic field types and small domain checks."""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, Field, field_validator

from .error_handling import InvalidArgumentError

AccessProbability = Annotated[float, Field(gt=0.0, le=1.0)]
PositiveFloat = Annotated[float, Field(gt=0.0)]
PositiveCount = Annotated[int, Field(ge=1)]

SchemeKind = Literal["hybrid-layered", "random-noma", "grant-free-oma", "coordinated-oma"]
Placement = Literal["disk", "balanced"]
FadingModel = Literal["rayleigh", "none"]
FigureId = Literal["fig3", "fig4a", "fig4b", "fig4c", "fig5"]
SweepVariable = Literal["Q", "L", "M", "p_E"]


class GridStep(BaseModel):
    """Validate a p_E search grid step."""

    step: float

    @field_validator("step")
    @classmethod
    def validate_step(cls, v: float) -> float:
        if not (0.0 < v < 1.0):
            raise ValueError("grid_step must lie in (0, 1)")
        return v


def require_positive(name: str, value: float) -> float:
    """Raise InvalidArgumentError unless ``value`` is strictly positive."""
    if not value > 0:
        raise InvalidArgumentError(f"{name} must be > 0, got {value}")
    return value


def require_levels(L: int) -> int:
    if int(L) != L or L < 1:
        raise InvalidArgumentError(f"number of levels must be an integer >= 1, got {L}")
    return int(L)


def require_subchannels(M: int, minimum: int = 2) -> int:
    if int(M) != M or M < minimum:
        raise InvalidArgumentError(f"number of subchannels must be >= {minimum}, got {M}")
    return int(M)


def require_probability(name: str, value: float, allow_zero: bool = False) -> float:
    lower_ok = value >= 0.0 if allow_zero else value > 0.0
    if not (lower_ok and value <= 1.0):
        bound = "[0, 1]" if allow_zero else "(0, 1]"
        raise InvalidArgumentError(f"{name} must lie in {bound}, got {value}")
    return float(value)
