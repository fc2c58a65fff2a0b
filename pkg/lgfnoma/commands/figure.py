"""Preset figure reproductions."""

from __future__ import annotations

import argparse

from ..config import presets
from ..config.settings import Settings
from ..report.experiment import check_budget
from ..report.figures import FIGURE_IDS, emit_figure_data
from ..utils.cli_helpers import CLIFormatter, format_table
from .common import finish, output_dir, resolve_config, seed_of


def _planned_work(figure: str, n_slots: int, search_points: int) -> int:
    if figure == "fig3":
        return n_slots * sum(presets.FIG3_TOTAL_CONTENDERS)
    if figure == "fig5":
        # four single runs plus the random NOMA p_E search
        runs_per_point = 4 + search_points
        return n_slots * runs_per_point * sum(presets.FIG5_DEVICES)
    return 0


async def run_figure(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    slots_given = args.slots is not None
    if args.figure == "fig3":
        n_slots = config.n_slots if slots_given else presets.FIG3_SLOTS
    else:
        n_slots = config.n_slots if slots_given else presets.FIG5_SLOTS
    check_budget(_planned_work(args.figure, n_slots, config.mc_search_points))

    data = await emit_figure_data(
        args.figure,
        config.system,
        output_dir(config),
        n_slots=n_slots,
        seed=seed_of(config),
        grid_step=config.grid_step,
        parallel=Settings.LGF_PARALLEL,
    )
    print(CLIFormatter.header(f"{args.figure}: {presets.FIGURE_DESCRIPTIONS[args.figure]}"))
    print(format_table(list(data.frame.columns), data.frame.values.tolist()))

    finish(args.figure, config, [data.csv_path], figure=args.figure, **data.details)
    return 0


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = subparsers.add_parser("figure", parents=[parent], help="Reproduce a preset figure")
    p.add_argument("figure", choices=FIGURE_IDS, help="Figure id")
