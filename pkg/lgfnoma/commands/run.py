"""Run the sweep described by a config file."""

from __future__ import annotations

import argparse

from ..report.experiment import run_experiment
from ..utils.cli_helpers import CLIFormatter
from .common import resolve_config


async def run_sweep(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outputs = await run_experiment(config)
    for path in outputs:
        print(CLIFormatter.success(f"wrote {path}"))
    return 0


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    subparsers.add_parser("run", parents=[parent], help="Run the configured experiment sweep")
