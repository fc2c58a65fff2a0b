"""Preset data sets for the power, overhead and throughput figures."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, get_args

import pandas as pd

from ..config import presets
from ..config.config_loader import default_schemes
from ..config.settings import Settings
from ..core.analytic import layer_probabilities
from ..core.params import SystemParams, to_dbm
from ..core.power import (
    avg_power_random_noma,
    avg_power_ub_hybrid,
    hybrid_power_fn,
    random_noma_power_fn,
    select_levels,
)
from ..core.simulator import CI99_Z, RngSpec, SchemeConfig, simulate_throughput_async
from ..utils.error_handling import InvalidArgumentError
from ..utils.monitoring import timed
from ..utils.validators import FigureId
from .overhead import overhead_report
from .schemes import EvaluationContext, evaluate_scheme
from .writers import write_csv

logger = logging.getLogger(__name__)

FIGURE_IDS: Tuple[str, ...] = get_args(FigureId)

FIG3_COLUMNS = [
    "C_T",
    "layer",
    "throughput_analytic",
    "throughput_mc",
    "ci99",
    "connection_prob_analytic",
    "connection_prob_mc",
]
FIG4A_COLUMNS = ["L", "hybrid_power_dbm", "random_noma_power_dbm", "p_max_dbm"]
FIG4B_COLUMNS = ["M", "L", "hybrid_power_dbm", "random_noma_power_dbm", "p_max_dbm"]
FIG4C_COLUMNS = ["Q_success", "hybrid_bytes", "coordinated_bytes", "ratio"]
FIG5_COLUMNS = [
    "Q",
    "scheme",
    "p_E",
    "L",
    "throughput_analytic",
    "throughput_mc",
    "ci99",
    "feasible",
]


@dataclass
class FigureData:
    figure: str
    csv_path: Path
    frame: pd.DataFrame
    details: Dict[str, Any] = field(default_factory=dict)


async def _fig3(params: SystemParams, n_slots: int, seed: RngSpec) -> pd.DataFrame:
    L = presets.FIG3_LEVELS
    M = params.num_subchannels
    rows: List[List[Any]] = []
    for i, C_T in enumerate(presets.FIG3_TOTAL_CONTENDERS):
        C = C_T / L
        probs = layer_probabilities(M, C, L)
        scheme = SchemeConfig(kind="hybrid-layered", num_levels=L)
        estimate = await simulate_throughput_async(
            scheme, M, L, C_T, n_slots, seed.child(i), placement="balanced", params=params
        )
        mc_probs = estimate.per_layer_connection_prob()
        for l in range(1, L + 1):
            rows.append(
                [
                    C_T,
                    l,
                    C * float(probs[l - 1]),
                    estimate.per_layer_means[l - 1],
                    CI99_Z * estimate.per_layer_std_errors[l - 1],
                    float(probs[l - 1]),
                    mc_probs[l - 1],
                ]
            )
    return pd.DataFrame(rows, columns=FIG3_COLUMNS)


def _fig4a(params: SystemParams) -> pd.DataFrame:
    rows = [
        [
            L,
            to_dbm(avg_power_ub_hybrid(params, L)),
            to_dbm(avg_power_random_noma(params, L)),
            params.max_avg_power_dbm,
        ]
        for L in presets.FIG4A_LEVELS
    ]
    return pd.DataFrame(rows, columns=FIG4A_COLUMNS)


def _fig4b(params: SystemParams) -> pd.DataFrame:
    L = params.receiver_max_levels
    rows = []
    for M in presets.FIG4B_SUBCHANNELS:
        scenario = params.with_subchannels(M)
        rows.append(
            [
                M,
                L,
                to_dbm(avg_power_ub_hybrid(scenario, L)),
                to_dbm(avg_power_random_noma(scenario, L)),
                params.max_avg_power_dbm,
            ]
        )
    return pd.DataFrame(rows, columns=FIG4B_COLUMNS)


def _fig4c(params: SystemParams) -> pd.DataFrame:
    rows = []
    for Q_success in presets.FIG4C_SUCCESSES:
        report = overhead_report(Q_success, params)
        rows.append([Q_success, report.hybrid_bytes, report.coordinated_bytes, report.ratio])
    return pd.DataFrame(rows, columns=FIG4C_COLUMNS)


async def _fig5(
    params: SystemParams, ctx: EvaluationContext, seed: RngSpec
) -> tuple[pd.DataFrame, Dict[str, Any]]:
    schemes = default_schemes()
    rows: List[List[Any]] = []
    optimisations: List[Dict[str, Any]] = []
    for i, Q in enumerate(presets.FIG5_DEVICES):
        for j, spec in enumerate(schemes):
            result = await evaluate_scheme(
                spec, params, Q, ctx, RngSpec(seed.master_seed, i * len(schemes) + j)
            )
            rows.append(
                [
                    Q,
                    result.scheme,
                    result.p_E,
                    result.L,
                    result.throughput_analytic,
                    result.throughput_mc,
                    result.ci99,
                    result.feasible,
                ]
            )
            if result.opt is not None:
                optimisations.append({"Q": Q, **result.opt.model_dump()})
    return pd.DataFrame(rows, columns=FIG5_COLUMNS), {"jacnls": optimisations}


@timed("figures")
def level_selections(params: SystemParams) -> Dict[str, Any]:
    return {
        "hybrid-layered": select_levels(params, hybrid_power_fn(params)),
        "random-noma": select_levels(params, random_noma_power_fn(params)),
    }


async def emit_figure_data(
    figure: str,
    params: SystemParams,
    out_dir: Path,
    *,
    n_slots: Optional[int] = None,
    seed: Optional[RngSpec] = None,
    grid_step: float = 1e-3,
    parallel: bool = True,
) -> FigureData:
    """Compute the preset data set for ``figure`` and write ``<figure>.csv``."""
    if figure not in FIGURE_IDS:
        raise InvalidArgumentError(
            f"unknown figure id {figure!r}; expected one of {', '.join(FIGURE_IDS)}"
        )
    seed = seed or RngSpec(Settings.LGF_SEED)
    details: Dict[str, Any] = {"level_selection": level_selections(params)}
    logger.info(f"Building {figure}: {presets.FIGURE_DESCRIPTIONS[figure]}")

    if figure == "fig3":
        frame = await _fig3(params, n_slots or presets.FIG3_SLOTS, seed)
    elif figure == "fig4a":
        frame = _fig4a(params)
    elif figure == "fig4b":
        frame = _fig4b(params)
    elif figure == "fig4c":
        frame = _fig4c(params)
    else:
        ctx = EvaluationContext(
            n_slots=n_slots or presets.FIG5_SLOTS, grid_step=grid_step, parallel=parallel
        )
        frame, extra = await _fig5(params, ctx, seed)
        details.update(extra)

    path = write_csv(frame, out_dir / f"{figure}.csv")
    return FigureData(figure=figure, csv_path=path, frame=frame, details=details)
