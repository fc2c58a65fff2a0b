"""Joint access control and NOMA layer selection.

The level count is fixed first from the average power budget, then the EAB
parameter is searched on a uniform grid for the largest closed-form
throughput whose mean access delay meets the requirement. When no grid point
meets the delay requirement the throughput maximiser is returned anyway and
flagged infeasible.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Collection, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..utils.error_handling import InvalidArgumentError, handle_errors
from ..utils.validators import GridStep, Placement, require_levels, require_subchannels
from .analytic import layer_probabilities, success_prob, total_throughput
from .params import SystemParams
from .power import LevelSelection, hybrid_power_fn, select_levels
from .simulator import RngSpec, SchemeConfig, ThroughputEstimate, simulate_throughput

logger = logging.getLogger(__name__)

DEFAULT_GRID_STEP = 1e-3


class OptResult(BaseModel):
    """Chosen operating point and whether it meets the delay requirement."""

    model_config = ConfigDict(frozen=True)

    p_E_star: float
    L_star: int
    throughput: float
    p_a: float
    p_succ: float
    avg_delay: float
    feasible: bool
    search_grid_step: float
    degenerate: bool = False
    l_selection: Optional[LevelSelection] = None


def p_grid(grid_step: float) -> np.ndarray:
    """Search grid {k/n : k = 1..n} with n = round(1/grid_step)."""
    try:
        step = GridStep(step=grid_step).step
    except ValidationError as e:
        raise InvalidArgumentError(f"invalid grid step {grid_step}: {e.errors()[0]['msg']}") from e
    n = max(1, int(round(1.0 / step)))
    return np.arange(1, n + 1, dtype=float) / n


def _grid_metrics(Q: float, M: int, L: int, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form throughput and access probability at each p_E in ``p``."""
    if Q == 0:
        return np.zeros_like(p), p.copy()
    C = p * Q / L
    probs = layer_probabilities(M, C, L)
    throughput = C * probs.sum(axis=-1)
    p_a = p * probs.mean(axis=-1)
    return throughput, p_a


def feasible_set(
    Q: float, M: int, L: int, T_P: float, D_req: float, grid_step: float = DEFAULT_GRID_STEP
) -> Tuple[float, ...]:
    """Grid points whose mean access delay T_P/p_a meets D_req (may be empty)."""
    M = require_subchannels(M)
    L = require_levels(L)
    if Q < 0:
        raise InvalidArgumentError(f"number of devices must be >= 0, got {Q}")
    grid = p_grid(grid_step)
    _, p_a = _grid_metrics(Q, M, L, grid)
    # T_P / p_a <= D_req, written so p_a = 0 is simply infeasible
    ok = p_a * D_req >= T_P
    return tuple(float(x) for x in grid[ok])


def optimize_pe(
    Q: float,
    M: int,
    L: int,
    grid_step: float = DEFAULT_GRID_STEP,
    restrict: Optional[Collection[float]] = None,
) -> Tuple[float, float]:
    """Throughput-maximising p_E over ``restrict``, or the full grid if it is empty.

    Ties go to the smaller p_E.
    """
    M = require_subchannels(M)
    L = require_levels(L)
    if restrict:
        candidates = np.array(sorted(restrict), dtype=float)
    else:
        candidates = p_grid(grid_step)
    if Q == 0:
        logger.warning("Optimising p_E with Q=0: throughput is 0 everywhere")
    throughput, _ = _grid_metrics(Q, M, L, candidates)
    best = int(np.argmax(throughput))
    return float(candidates[best]), float(throughput[best])


@handle_errors("optimizer")
def jacnls(
    Q: float,
    M: int,
    params: SystemParams,
    grid_step: float = DEFAULT_GRID_STEP,
) -> OptResult:
    """Pick L from the power budget, then the best delay-feasible p_E at that L."""
    M = require_subchannels(M)
    if Q < 0:
        raise InvalidArgumentError(f"number of devices must be >= 0, got {Q}")
    scenario = params if M == params.num_subchannels else params.with_subchannels(M)
    selection = select_levels(scenario, hybrid_power_fn(scenario))
    L = selection.l_max

    candidates = feasible_set(
        Q, M, L, scenario.slot_period_ms, scenario.delay_requirement_ms, grid_step
    )
    feasible = bool(candidates)
    p_E, _ = optimize_pe(Q, M, L, grid_step, restrict=candidates)
    if not feasible:
        logger.warning(
            "No p_E on the grid meets D_req=%.3f ms at Q=%s, M=%d, L=%d; returning best effort",
            scenario.delay_requirement_ms,
            Q,
            M,
            L,
        )

    p_succ = 1.0 if Q == 0 else success_prob(M, p_E * Q / L, L)
    p_a = p_E * p_succ
    delay = scenario.slot_period_ms / p_a if p_a > 0 else math.inf
    return OptResult(
        p_E_star=p_E,
        L_star=L,
        throughput=total_throughput(M, Q, L, p_E),
        p_a=p_a,
        p_succ=p_succ,
        avg_delay=delay,
        feasible=feasible,
        search_grid_step=1.0 / round(1.0 / grid_step),
        degenerate=Q == 0,
        l_selection=selection,
    )


@dataclass(frozen=True)
class McSearchResult:
    p_E: float
    estimate: ThroughputEstimate
    p_a: float
    feasible: bool


def random_noma_pe_search(
    Q: int,
    M: int,
    L: int,
    params: SystemParams,
    n_slots: int,
    seed: RngSpec,
    points: int = 10,
    placement: Placement = "disk",
) -> McSearchResult:
    """Coarse simulation-driven p_E search for random NOMA with EAB.

    Access probability is estimated as p_E times the simulated decoded
    fraction of transmissions.
    """
    if points < 1:
        raise InvalidArgumentError(f"points must be >= 1, got {points}")
    results = []
    for k in range(1, points + 1):
        p = k / points
        scheme = SchemeConfig(kind="random-noma", eab_enabled=True, p_E=p, num_levels=L)
        estimate = simulate_throughput(
            scheme, M, L, Q, n_slots, seed.child(k), placement=placement, params=params
        )
        p_a = p * estimate.success_ratio
        ok = p_a * params.delay_requirement_ms >= params.slot_period_ms
        results.append(McSearchResult(p_E=p, estimate=estimate, p_a=p_a, feasible=ok))
        logger.debug("random NOMA p_E=%.3f: T=%.4f p_a=%.4f", p, estimate.mean, p_a)

    pool = [r for r in results if r.feasible] or results
    # max() keeps the first maximum, i.e. the smallest p_E
    return max(pool, key=lambda r: r.estimate.mean)
