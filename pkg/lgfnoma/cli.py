#!/usr/bin/env python3
"""lgfnoma command-line interface.

Subcommands evaluate the closed form, run simulations, optimise the access
parameters, reproduce preset figures, check the closed form exhaustively and
run configured sweeps. Exit codes: 0 success, 2 configuration or argument
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from typing import Awaitable, Callable, Dict, List, Optional

from .commands import analytic, figure, optimize, oracle, run, simulate
from .config.settings import Settings, setup_logging
from .utils.error_handling import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, exit_code_for
from .utils.error_messages import format_error_for_cli

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], Awaitable[int]]

HANDLERS: Dict[str, Handler] = {
    "analytic": analytic.run_analytic,
    "simulate": simulate.run_simulate,
    "optimize": optimize.run_optimize,
    "figure": figure.run_figure,
    "oracle": oracle.run_oracle,
    "run": run.run_sweep,
}


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the configuration-error code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=None, help="Experiment TOML file")
    common.add_argument("--seed", type=int, default=None, help="Master seed (u64)")
    common.add_argument("--slots", type=int, default=None, help="Simulated slots per run")
    common.add_argument("--grid-step", type=float, default=None, help="p_E search grid step")
    common.add_argument("--out", default=None, help="Output directory (default: LGF_OUTPUT_DIR)")
    common.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "NO"],
        help="Set log level",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lgfnoma", description="Layered grant-free NOMA access toolkit")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _common_options()
    for module in (analytic, simulate, optimize, figure, oracle, run):
        module.add_parser(subparsers, common)
    return parser


async def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG

    setup_logging(args.log_level)
    if not Settings.validate():
        print("error: invalid LGF_* environment settings", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return await HANDLERS[args.command](args)
    except Exception as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(format_error_for_cli(e), file=sys.stderr)
        return exit_code_for(e)


def app() -> None:
    """Entry point for the CLI application."""
    try:
        exit_code = asyncio.run(main())
    except KeyboardInterrupt:
        print("\ninterrupted", file=sys.stderr)
        exit_code = EXIT_CONFIG
    sys.exit(exit_code if exit_code in (EXIT_OK, EXIT_CONFIG, EXIT_BUDGET) else EXIT_CONFIG)


if __name__ == "__main__":
    app()
