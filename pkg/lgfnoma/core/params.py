"""Scenario parameters, layer geometry and per-device transmit power."""

from __future__ import annotations

import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from ..utils.error_handling import InvalidArgumentError, InvalidChannelError, OutOfCellError
from ..utils.validators import PositiveCount, PositiveFloat, require_levels


def from_db(x: float) -> float:
    """Linear value of a dB quantity."""
    return float(10.0 ** (x / 10.0))


def to_dbm(p: float) -> float:
    """10·log10 of a normalized power (the normalized unit is taken as 1 mW)."""
    if not p > 0:
        raise InvalidArgumentError(f"power must be > 0 to convert to dBm, got {p}")
    return float(10.0 * math.log10(p))


class SystemParams(BaseModel):
    """All scenario constants. Defaults reproduce the standard evaluation setup."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    total_bandwidth_khz: PositiveFloat = 180.0
    subchannel_bandwidth_khz: PositiveFloat = 3.75
    target_sinr_db: float = 6.0
    pathloss_exponent: float = Field(3.8, gt=2.0)
    cell_radius: PositiveFloat = 1.0
    antenna_constant: PositiveFloat = 1.0
    slot_period_ms: PositiveFloat = 0.2
    delay_requirement_ms: PositiveFloat = 1.0
    max_avg_power_dbm: float = 18.0
    receiver_max_levels: PositiveCount = 5
    num_devices: PositiveCount = 300
    broadcast_overhead_bytes: PositiveFloat = 2.0
    connection_setup_bytes: PositiveFloat = 220.0
    # None selects the pathloss-only expectation of d^beta over the disk.
    inv_gain_expectation: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def _check_invariants(self) -> "SystemParams":
        ratio = self.total_bandwidth_khz / self.subchannel_bandwidth_khz
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"B_T/B must be an integer, got {ratio}")
        if round(ratio) < 2:
            raise ValueError(f"at least 2 subchannels are required, got {round(ratio)}")
        if self.slot_period_ms > self.delay_requirement_ms:
            raise ValueError("slot_period_ms must not exceed delay_requirement_ms")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def num_subchannels(self) -> int:
        return int(round(self.total_bandwidth_khz / self.subchannel_bandwidth_khz))

    @computed_field  # type: ignore[prop-decorator]
    @property
    def target_sinr(self) -> float:
        return from_db(self.target_sinr_db)

    @property
    def max_avg_power(self) -> float:
        """P_max as a normalized linear power."""
        return from_db(self.max_avg_power_dbm)

    @property
    def default_inv_gain(self) -> float:
        """E[1/g] for the random NOMA power formula."""
        if self.inv_gain_expectation is not None:
            return self.inv_gain_expectation
        beta = self.pathloss_exponent
        return 2.0 * self.cell_radius**beta / ((beta + 2.0) * self.antenna_constant)

    def with_subchannels(self, M: int) -> "SystemParams":
        """Copy of these parameters with M subchannels over the same total bandwidth."""
        if int(M) != M or M < 2:
            raise InvalidArgumentError(f"number of subchannels must be >= 2, got {M}")
        return self.replace(subchannel_bandwidth_khz=self.total_bandwidth_khz / int(M))

    def replace(self, **changes: object) -> "SystemParams":
        """Validated copy with ``changes`` applied."""
        data = self.model_dump(exclude={"num_subchannels", "target_sinr"})
        data.update(changes)
        return SystemParams.model_validate(data)


class LayerPlan(BaseModel):
    """A concrete layering: L levels, their received powers and ring boundaries."""

    model_config = ConfigDict(frozen=True)

    num_levels: PositiveCount
    power_levels: Tuple[float, ...]
    ring_boundaries: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "LayerPlan":
        if len(self.power_levels) != self.num_levels:
            raise ValueError("power_levels must hold one value per level")
        if len(self.ring_boundaries) != self.num_levels + 1:
            raise ValueError("ring_boundaries must hold L + 1 values")
        if any(a <= b for a, b in zip(self.power_levels, self.power_levels[1:])):
            raise ValueError("power_levels must be strictly decreasing")
        if any(a >= b for a, b in zip(self.ring_boundaries, self.ring_boundaries[1:])):
            raise ValueError("ring_boundaries must be strictly increasing")
        if self.ring_boundaries[0] != 0.0:
            raise ValueError("ring_boundaries must start at 0")
        return self

    @property
    def cell_radius(self) -> float:
        return self.ring_boundaries[-1]

    def power(self, layer: int) -> float:
        """Target received power v_l of 1-based ``layer``."""
        if not 1 <= layer <= self.num_levels:
            raise InvalidArgumentError(f"layer must lie in 1..{self.num_levels}, got {layer}")
        return self.power_levels[layer - 1]


def build_layer_plan(params: SystemParams, L: int) -> LayerPlan:
    """Geometric power ladder v_l = Γ(Γ+1)^(L−l) over L equal-area rings."""
    L = require_levels(L)
    gamma = params.target_sinr
    D = params.cell_radius
    levels = tuple(gamma * (gamma + 1.0) ** (L - l) for l in range(1, L + 1))
    rings = tuple(D * math.sqrt(l / L) for l in range(L + 1))
    # Keep the outer boundary exactly at D.
    rings = rings[:-1] + (D,)
    return LayerPlan(num_levels=L, power_levels=levels, ring_boundaries=rings)


def layer_of(distance: float, plan: LayerPlan) -> int:
    """1-based layer l with D_ring[l−1] < d ≤ D_ring[l]; d = 0 belongs to layer 1."""
    if distance < 0 or distance > plan.cell_radius:
        raise OutOfCellError(f"distance {distance} lies outside the cell [0, {plan.cell_radius}]")
    index = int(np.searchsorted(plan.ring_boundaries, distance, side="left"))
    return max(index, 1)


def layers_of(distances: np.ndarray, plan: LayerPlan) -> np.ndarray:
    """Vectorised layer_of returning 1-based layers."""
    d = np.asarray(distances, dtype=float)
    if d.size and (d.min() < 0 or d.max() > plan.cell_radius):
        raise OutOfCellError(f"distances must lie in [0, {plan.cell_radius}]")
    index = np.searchsorted(np.asarray(plan.ring_boundaries), d, side="left")
    return np.maximum(index, 1)


def tx_power(level_value: float, gains: Union[Sequence[float], np.ndarray]) -> Tuple[float, int]:
    """Transmit power and 1-based subchannel for a device targeting ``level_value``.

    The device uses its strongest subchannel (lowest index on ties) and
    inverts its gain, so the received power equals the target exactly.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise InvalidArgumentError("gains must be a non-empty 1-D sequence")
    if np.any(~(g > 0)):
        raise InvalidChannelError("all channel gains must be > 0")
    best = int(np.argmax(g))
    return float(level_value / g[best]), best + 1


def tx_powers(level_values: np.ndarray, gains: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row-wise ``tx_power``: one device per row of ``gains``."""
    v = np.asarray(level_values, dtype=float)
    g = np.asarray(gains, dtype=float)
    if g.ndim != 2 or g.shape[1] < 1 or g.shape[0] != v.shape[0]:
        raise InvalidArgumentError("gains must be a (devices, subchannels) array matching levels")
    if np.any(~(g > 0)):
        raise InvalidChannelError("all channel gains must be > 0")
    best = np.argmax(g, axis=1)
    return v / g[np.arange(g.shape[0]), best], best + 1
