"""Average transmit power formulas and the maximum acceptable number of levels."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from ..utils.error_handling import InvalidArgumentError, UnsupportedError
from ..utils.validators import require_levels, require_positive
from .params import SystemParams, build_layer_plan

logger = logging.getLogger(__name__)

PowerFn = Callable[[int], float]

# Upper end of the L sweep used to find L_max and to check monotonicity.
DEFAULT_SEARCH_LIMIT = 64


def avg_power_ub_hybrid(params: SystemParams, L: int, M: Optional[int] = None) -> float:
    """Upper bound on the average transmit power of the layered scheme (M ≥ 2)."""
    L = require_levels(L)
    M = params.num_subchannels if M is None else int(M)
    if M < 2:
        raise UnsupportedError(f"the average power bound needs M >= 2, got M={M}")
    plan = build_layer_plan(params, L)
    factor = min(2.0 * math.log(2.0), M / (M - 1.0))
    beta = params.pathloss_exponent
    A0 = params.antenna_constant
    total = 0.0
    for l, v in enumerate(plan.power_levels, start=1):
        ring = params.cell_radius * math.sqrt(l / L)
        total += v / (A0 * ring ** (-beta))
    return factor / L * total


def avg_power_random_noma(
    params: SystemParams, L: int, inv_gain_expectation: Optional[float] = None
) -> float:
    """Average transmit power when the level is drawn at random: mean(v_l)·E[1/g]."""
    L = require_levels(L)
    expectation = params.default_inv_gain if inv_gain_expectation is None else inv_gain_expectation
    require_positive("inv_gain_expectation", expectation)
    plan = build_layer_plan(params, L)
    return sum(plan.power_levels) / L * expectation


def hybrid_power_fn(params: SystemParams) -> PowerFn:
    return lambda L: avg_power_ub_hybrid(params, L)


def random_noma_power_fn(params: SystemParams) -> PowerFn:
    return lambda L: avg_power_random_noma(params, L)


@dataclass(frozen=True)
class LevelSelection:
    """Outcome of the L_max search.

    ``raw`` is the largest L with power below P_max before the receiver cap
    (0 when even L = 1 violates the budget); ``l_max`` is the capped value.
    """

    l_max: int
    raw: int
    cap: int
    degenerate: bool


def select_levels(
    params: SystemParams,
    power_fn: PowerFn,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
) -> LevelSelection:
    p_max = params.max_avg_power
    cap = params.receiver_max_levels
    limit = max(search_limit, cap)

    raw = 0
    previous = -math.inf
    for L in range(1, limit + 1):
        try:
            value = power_fn(L)
        except OverflowError:
            break
        if not math.isfinite(value):
            break
        if value <= previous:
            raise InvalidArgumentError(f"power function is not increasing at L={L}")
        previous = value
        if value >= p_max:
            # power_fn is increasing, so no larger L can satisfy the budget
            break
        raw = L

    degenerate = raw == 0
    l_max = max(1, min(cap, raw))
    if degenerate:
        logger.warning(
            "Average power at L=1 already reaches P_max=%.2f dBm; using L=1",
            params.max_avg_power_dbm,
        )
    return LevelSelection(l_max=l_max, raw=raw, cap=cap, degenerate=degenerate)


def max_levels(params: SystemParams, power_fn: PowerFn) -> int:
    """min(L_u, max{L : power_fn(L) < P_max}), never below 1."""
    return select_levels(params, power_fn).l_max
