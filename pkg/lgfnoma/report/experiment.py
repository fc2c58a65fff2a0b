"""Sweep orchestration: evaluate every scheme at every sweep point and write results."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from ..config.config_loader import ExperimentConfig
from ..config.settings import Settings
from ..core.simulator import RngSpec
from ..utils.error_handling import BudgetExceededError
from ..utils.monitoring import get_metrics_collector
from .figures import level_selections
from .schemes import EvaluationContext, evaluate_scheme, mc_work
from .writers import write_csv, write_summary

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "sweep_var",
    "sweep_value",
    "Q",
    "M",
    "scheme",
    "p_E",
    "L",
    "throughput_analytic",
    "throughput_mc",
    "ci99",
    "feasible",
    "avg_delay_ms",
]


def context_for(config: ExperimentConfig, parallel: Optional[bool] = None) -> EvaluationContext:
    return EvaluationContext(
        n_slots=config.n_slots,
        grid_step=config.grid_step,
        placement=config.placement,
        mc_search_points=config.mc_search_points,
        parallel=Settings.LGF_PARALLEL if parallel is None else parallel,
    )


def _population(config: ExperimentConfig, value: float) -> int:
    return int(value) if config.sweep_variable == "Q" else config.system.num_devices


def planned_device_slots(config: ExperimentConfig, ctx: EvaluationContext) -> int:
    total = 0
    for value in config.sweep_points():
        Q = _population(config, value)
        total += sum(mc_work(spec, Q, ctx) for spec in config.schemes)
    return total


def check_budget(work: int, limit: Optional[int] = None) -> None:
    """Raise BudgetExceededError before any simulation if ``work`` is over budget."""
    limit = Settings.LGF_MAX_DEVICE_SLOTS if limit is None else limit
    if work > limit:
        raise BudgetExceededError(
            f"planned simulation work of {work} device-slots exceeds LGF_MAX_DEVICE_SLOTS={limit}"
        )
    logger.debug(f"Planned simulation work: {work} device-slots (limit {limit})")


async def run_experiment(
    config: ExperimentConfig, parallel: Optional[bool] = None
) -> List[Path]:
    """Evaluate the configured sweep and write ``<name>.csv`` and ``<name>.json``."""
    collector = get_metrics_collector()
    ctx = context_for(config, parallel)
    check_budget(planned_device_slots(config, ctx))

    rows: List[List[Any]] = []
    optimisations: List[Dict[str, Any]] = []
    n_schemes = len(config.schemes)
    var = config.sweep_variable

    for i, value in enumerate(config.sweep_points()):
        params = config.system
        if var == "M":
            params = params.with_subchannels(int(value))
        Q = _population(config, value)
        for j, spec in enumerate(config.schemes):
            result = await evaluate_scheme(
                spec,
                params,
                Q,
                ctx,
                RngSpec(config.master_seed, i * n_schemes + j),
                L_override=int(value) if var == "L" else None,
                p_E_override=value if var == "p_E" else None,
            )
            rows.append(
                [
                    var,
                    value,
                    Q,
                    result.M,
                    result.scheme,
                    result.p_E,
                    result.L,
                    result.throughput_analytic,
                    result.throughput_mc,
                    result.ci99,
                    result.feasible,
                    result.avg_delay_ms,
                ]
            )
            if result.opt is not None:
                optimisations.append({var: value, **result.opt.model_dump()})
        logger.info(f"Finished {var}={value:g} ({i + 1}/{len(config.sweep_points())})")

    out_dir = Path(config.output_dir)
    csv_path = write_csv(pd.DataFrame(rows, columns=SWEEP_COLUMNS), out_dir / f"{config.name}.csv")
    json_path = write_summary(
        out_dir / f"{config.name}.json",
        config=config.model_dump(mode="json"),
        outputs=[csv_path],
        runtime=collector.summary(),
        jacnls=optimisations,
        level_selection=level_selections(config.system),
    )
    return [csv_path, json_path]
