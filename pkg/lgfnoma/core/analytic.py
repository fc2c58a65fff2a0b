"""Closed-form connection probability, throughput, access probability and delay."""

from __future__ import annotations

import logging
import math
from typing import List

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils.error_handling import InfiniteDelayError, InvalidArgumentError
from ..utils.validators import (
    AccessProbability,
    PositiveCount,
    PositiveFloat,
    require_levels,
    require_probability,
    require_subchannels,
)

logger = logging.getLogger(__name__)


def connection_prob(M: int, C: float, l: int) -> float:
    """Probability that a device of layer ``l`` is decoded with C contenders per layer."""
    M = require_subchannels(M)
    if int(l) != l or l < 1:
        raise InvalidArgumentError(f"layer index must be an integer >= 1, got {l}")
    if C < 0:
        raise InvalidArgumentError(f"contenders per layer must be >= 0, got {C}")
    if C < 1:
        logger.debug("connection_prob evaluated with C=%s < 1 (outside the probabilistic range)", C)
    return float((1.0 - 1.0 / M) ** (C * l - 1) * (1.0 + C / (M - 1.0)) ** (l - 1))


def layer_probabilities(M: int, C: ArrayLike, L: int) -> np.ndarray:
    """Vectorised connection_prob for layers 1..L; shape C.shape + (L,)."""
    M = require_subchannels(M)
    L = require_levels(L)
    c = np.asarray(C, dtype=float)
    if np.any(c < 0):
        raise InvalidArgumentError("contenders per layer must be >= 0")
    l = np.arange(1, L + 1, dtype=float)
    c = c[..., np.newaxis]
    # Work in the log domain so heavy overload underflows cleanly to 0.
    log_p = (c * l - 1.0) * math.log1p(-1.0 / M) + (l - 1.0) * np.log1p(c / (M - 1.0))
    return np.exp(log_p)


def layer_throughput(M: int, C: float, l: int) -> float:
    return C * connection_prob(M, C, l)


def total_throughput(M: int, Q: float, L: int, p_E: float) -> float:
    """Expected decoded devices per slot with C = p_E·Q/L contenders per layer."""
    L = require_levels(L)
    require_probability("p_E", p_E)
    if Q < 0:
        raise InvalidArgumentError(f"number of devices must be >= 0, got {Q}")
    C = p_E * Q / L
    return float(sum(layer_throughput(M, C, l) for l in range(1, L + 1)))


def success_prob(M: int, C: float, L: int) -> float:
    """p_succ: connection probability averaged over the L layers."""
    L = require_levels(L)
    return float(sum(connection_prob(M, C, l) for l in range(1, L + 1)) / L)


def access_prob(p_E: float, p_succ: float) -> float:
    """p_a = p_E·p_succ, the per-slot probability that a waiting device gets through."""
    require_probability("p_E", p_E)
    return p_E * p_succ


def avg_delay(T_P: float, p_a: float) -> float:
    """Mean access delay T_P/p_a under fast retrial (geometric attempt count)."""
    if p_a == 0:
        raise InfiniteDelayError("access probability is 0; the average delay is infinite")
    if not 0 < p_a <= 1:
        raise InvalidArgumentError(f"access probability must lie in (0, 1], got {p_a}")
    return T_P / p_a


def grant_free_throughput(M: int, C_T: float) -> float:
    """Slotted ALOHA over M subchannels with a single power level."""
    if C_T == 0:
        return 0.0
    return C_T * connection_prob(M, C_T, 1)


def coordinated_throughput(M: int, C_T: float) -> float:
    """BS-scheduled OMA serves min(M, C_T) devices per slot."""
    return float(min(M, C_T))


class AccessModel(BaseModel):
    """Parameters of one closed-form evaluation point."""

    model_config = ConfigDict(frozen=True)

    num_subchannels: int = Field(ge=2)
    contenders_per_layer: float = Field(ge=0.0)
    num_levels: PositiveCount
    eab_parameter: AccessProbability
    slot_period_ms: PositiveFloat

    @model_validator(mode="after")
    def _flag_sparse(self) -> "AccessModel":
        if self.contenders_per_layer < 1:
            logger.debug("AccessModel with C=%s < 1", self.contenders_per_layer)
        return self

    @classmethod
    def from_population(cls, M: int, Q: float, L: int, p_E: float, T_P: float) -> "AccessModel":
        return cls(
            num_subchannels=M,
            contenders_per_layer=p_E * Q / L,
            num_levels=L,
            eab_parameter=p_E,
            slot_period_ms=T_P,
        )

    def layer_probs(self) -> List[float]:
        M, C = self.num_subchannels, self.contenders_per_layer
        return [connection_prob(M, C, l) for l in range(1, self.num_levels + 1)]

    def layer_throughputs(self) -> List[float]:
        return [self.contenders_per_layer * p for p in self.layer_probs()]

    def throughput(self) -> float:
        return float(sum(self.layer_throughputs()))

    def p_succ(self) -> float:
        return success_prob(self.num_subchannels, self.contenders_per_layer, self.num_levels)

    def p_a(self) -> float:
        return access_prob(self.eab_parameter, self.p_succ())

    def delay_ms(self) -> float:
        return avg_delay(self.slot_period_ms, self.p_a())
