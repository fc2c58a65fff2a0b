"""JACNLS over one or more device populations."""

from __future__ import annotations

import argparse

import pandas as pd

from ..core.optimizer import jacnls
from ..report.writers import write_csv
from ..utils.cli_helpers import CLIFormatter, format_table
from .common import finish, output_dir, resolve_config, subchannels

COLUMNS = ["Q", "M", "p_E", "L", "throughput", "p_a", "avg_delay_ms", "feasible"]


async def run_optimize(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    M = subchannels(args, config)
    populations = args.Q or [config.system.num_devices]

    results = [jacnls(Q, M, config.system, config.grid_step) for Q in populations]
    rows = [
        [Q, M, r.p_E_star, r.L_star, r.throughput, r.p_a, r.avg_delay, r.feasible]
        for Q, r in zip(populations, results)
    ]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    print(CLIFormatter.header(f"JACNLS, M={M}, grid step {config.grid_step:g}"))
    print(format_table(COLUMNS, rows))
    for Q, r in zip(populations, results):
        if not r.feasible:
            print(CLIFormatter.warning(f"Q={Q}: no p_E meets the delay requirement (best effort)"))

    csv_path = write_csv(frame, output_dir(config) / "optimize.csv")
    finish(
        "optimize",
        config,
        [csv_path],
        jacnls=[{"Q": Q, **r.model_dump()} for Q, r in zip(populations, results)],
    )
    return 0


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = subparsers.add_parser("optimize", parents=[parent], help="Run JACNLS")
    p.add_argument("--Q", type=int, nargs="+", default=None, help="Device populations")
    p.add_argument("--M", type=int, default=None, help="Number of subchannels (default: config)")
