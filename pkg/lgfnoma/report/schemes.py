"""Per-scheme evaluation at one operating point, shared by sweeps and figures."""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass
from typing import Optional

from ..config.config_loader import SchemeSpec
from ..core.analytic import (
    coordinated_throughput,
    success_prob,
    total_throughput,
)
from ..core.optimizer import OptResult, feasible_set, jacnls, optimize_pe, random_noma_pe_search
from ..core.params import SystemParams
from ..core.power import random_noma_power_fn, select_levels
from ..core.simulator import (
    RngSpec,
    SchemeConfig,
    ThroughputEstimate,
    simulate_throughput,
    simulate_throughput_async,
)
from ..utils.monitoring import get_metrics_collector
from ..utils.validators import Placement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    Q: int
    M: int
    p_E: float
    L: int
    throughput_analytic: float
    throughput_mc: float
    ci99: float
    feasible: bool
    avg_delay_ms: float
    opt: Optional[OptResult] = None


@dataclass(frozen=True)
class EvaluationContext:
    """Run controls that stay fixed across a sweep."""

    n_slots: int
    grid_step: float
    placement: Placement = "balanced"
    mc_search_points: int = 10
    simulate: bool = True
    parallel: bool = True


def _delay(params: SystemParams, p_a: float) -> float:
    return params.slot_period_ms / p_a if p_a > 0 else math.inf


def _meets_delay(params: SystemParams, p_a: float) -> bool:
    return p_a * params.delay_requirement_ms >= params.slot_period_ms


def mc_work(spec: SchemeSpec, Q: int, ctx: EvaluationContext) -> int:
    """Device-slots one evaluation of ``spec`` will simulate."""
    if not ctx.simulate and spec.kind != "random-noma":
        return 0
    runs = 1
    if spec.kind == "random-noma" and spec.eab_enabled and spec.p_E is None:
        runs = ctx.mc_search_points
    return runs * ctx.n_slots * Q


async def _simulate(
    scheme: SchemeConfig,
    params: SystemParams,
    L: int,
    Q: int,
    ctx: EvaluationContext,
    seed: RngSpec,
) -> ThroughputEstimate:
    M = params.num_subchannels
    if ctx.parallel:
        return await simulate_throughput_async(
            scheme, M, L, Q, ctx.n_slots, seed, placement=ctx.placement, params=params
        )
    return simulate_throughput(
        scheme, M, L, Q, ctx.n_slots, seed, placement=ctx.placement, params=params
    )


def _best_feasible_pe(Q: int, params: SystemParams, L: int, grid_step: float) -> float:
    candidates = feasible_set(
        Q, params.num_subchannels, L, params.slot_period_ms, params.delay_requirement_ms, grid_step
    )
    return optimize_pe(Q, params.num_subchannels, L, grid_step, restrict=candidates)[0]


def _gated(kind: str, p_E: float, L: int) -> SchemeConfig:
    return SchemeConfig(kind=kind, eab_enabled=p_E < 1.0, p_E=p_E, num_levels=L)


async def evaluate_scheme(
    spec: SchemeSpec,
    params: SystemParams,
    Q: int,
    ctx: EvaluationContext,
    seed: RngSpec,
    *,
    L_override: Optional[int] = None,
    p_E_override: Optional[float] = None,
) -> SchemeResult:
    """Analytic value, simulation estimate and delay feasibility for one scheme."""
    M = params.num_subchannels
    start = asyncio.get_running_loop().time()
    opt: Optional[OptResult] = None
    estimate: Optional[ThroughputEstimate] = None
    nan = float("nan")

    if spec.kind == "hybrid-layered":
        L = L_override or spec.num_levels
        p_E = p_E_override or spec.p_E
        if L is None:
            opt = jacnls(Q, M, params, ctx.grid_step)
            L = opt.L_star
            if p_E is None and spec.eab_enabled:
                p_E = opt.p_E_star
        elif p_E is None and spec.eab_enabled:
            p_E = _best_feasible_pe(Q, params, L, ctx.grid_step)
        p_E = 1.0 if p_E is None else p_E
        analytic = total_throughput(M, Q, L, p_E)
        p_a = p_E * (1.0 if Q == 0 else success_prob(M, p_E * Q / L, L))
        if ctx.simulate:
            estimate = await _simulate(_gated(spec.kind, p_E, L), params, L, Q, ctx, seed)

    elif spec.kind == "random-noma":
        L = L_override or spec.num_levels
        if L is None:
            L = select_levels(params, random_noma_power_fn(params)).l_max
        p_E = p_E_override or spec.p_E
        analytic = nan
        if p_E is None and spec.eab_enabled:
            search = await asyncio.to_thread(
                random_noma_pe_search,
                Q,
                M,
                L,
                params,
                ctx.n_slots,
                seed,
                ctx.mc_search_points,
                ctx.placement,
            )
            p_E, estimate, p_a = search.p_E, search.estimate, search.p_a
        else:
            p_E = 1.0 if p_E is None else p_E
            estimate = await _simulate(_gated(spec.kind, p_E, L), params, L, Q, ctx, seed)
            p_a = p_E * estimate.success_ratio if Q > 0 else p_E

    elif spec.kind == "grant-free-oma":
        L = 1
        p_E = p_E_override or spec.p_E
        if p_E is None and spec.eab_enabled:
            p_E = _best_feasible_pe(Q, params, 1, ctx.grid_step)
        p_E = 1.0 if p_E is None else p_E
        analytic = total_throughput(M, Q, 1, p_E)
        p_a = p_E * (1.0 if Q == 0 else success_prob(M, p_E * Q, 1))
        if ctx.simulate:
            estimate = await _simulate(_gated(spec.kind, p_E, 1), params, 1, Q, ctx, seed)

    else:
        L = 1
        p_E = p_E_override or spec.p_E or 1.0
        load = p_E * Q
        analytic = coordinated_throughput(M, load)
        p_a = p_E * min(1.0, M / load) if load > 0 else p_E
        if ctx.simulate:
            estimate = await _simulate(_gated(spec.kind, p_E, 1), params, 1, Q, ctx, seed)

    get_metrics_collector().record_operation(
        "schemes", spec.kind, asyncio.get_running_loop().time() - start
    )
    return SchemeResult(
        scheme=spec.label,
        Q=Q,
        M=M,
        p_E=p_E,
        L=L,
        throughput_analytic=analytic,
        throughput_mc=estimate.mean if estimate is not None else nan,
        ci99=estimate.ci99_halfwidth if estimate is not None else nan,
        feasible=_meets_delay(params, p_a),
        avg_delay_ms=_delay(params, p_a),
        opt=opt,
    )
