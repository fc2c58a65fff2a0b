"""Closed-form evaluation at a single operating point."""

from __future__ import annotations

import argparse

import pandas as pd

from ..core.analytic import AccessModel
from ..core.params import to_dbm
from ..core.power import (
    avg_power_random_noma,
    avg_power_ub_hybrid,
    hybrid_power_fn,
    select_levels,
)
from ..report.writers import write_csv
from ..utils.cli_helpers import CLIFormatter, format_table
from ..utils.error_handling import InfiniteDelayError
from .common import finish, output_dir, population, resolve_config, scenario, subchannels

COLUMNS = ["layer", "connection_prob", "layer_throughput"]


async def run_analytic(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    Q = population(args, config)
    M = subchannels(args, config)
    params = scenario(config, M)
    L = args.L or select_levels(params, hybrid_power_fn(params)).l_max
    model = AccessModel.from_population(M, Q, L, args.p_E, params.slot_period_ms)

    probs = model.layer_probs()
    frame = pd.DataFrame(
        [[l, p, t] for l, (p, t) in enumerate(zip(probs, model.layer_throughputs()), start=1)],
        columns=COLUMNS,
    )
    try:
        delay = model.delay_ms()
    except InfiniteDelayError:
        delay = float("inf")

    summary = {
        "Q": Q,
        "M": M,
        "L": L,
        "p_E": args.p_E,
        "throughput": model.throughput(),
        "p_succ": model.p_succ(),
        "p_a": model.p_a(),
        "avg_delay_ms": delay,
        "hybrid_power_dbm": to_dbm(avg_power_ub_hybrid(params, L)),
        "random_noma_power_dbm": to_dbm(avg_power_random_noma(params, L)),
    }

    print(CLIFormatter.header(f"Closed form at Q={Q}, M={M}, L={L}, p_E={args.p_E:g}"))
    print(format_table(COLUMNS, frame.values.tolist()))
    print(format_table(["quantity", "value"], summary.items()))

    csv_path = write_csv(frame, output_dir(config) / "analytic.csv")
    finish("analytic", config, [csv_path], result=summary)
    return 0


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = subparsers.add_parser("analytic", parents=[parent], help="Evaluate the closed form")
    p.add_argument("--Q", type=int, default=None, help="Number of devices (default: config)")
    p.add_argument("--M", type=int, default=None, help="Number of subchannels (default: config)")
    p.add_argument("--L", type=int, default=None, help="Number of levels (default: L_max)")
    p.add_argument("--p-e", dest="p_E", type=float, default=1.0, help="EAB parameter p_E")
