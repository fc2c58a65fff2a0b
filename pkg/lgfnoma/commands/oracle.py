"""Exhaustive check of the closed form on small instances."""

from __future__ import annotations

import argparse
import logging
from itertools import product

import pandas as pd

from ..config.settings import Settings
from ..core.analytic import connection_prob
from ..core.enumeration import enumeration_size, exhaustive_connection_fractions
from ..report.writers import write_csv
from ..utils.cli_helpers import CLIFormatter
from ..utils.error_handling import EXIT_CONFIG, TooLargeInstanceError
from .common import finish, output_dir, resolve_config

logger = logging.getLogger(__name__)

COLUMNS = ["M", "C", "L", "layer", "exact", "closed_form", "abs_error"]
TOLERANCE = 1e-12


async def run_oracle(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    rows = []
    skipped = []
    for M, C, L in product(args.M, args.C, args.L):
        if enumeration_size(M, C, L) > Settings.LGF_MAX_ENUMERATION:
            logger.warning(f"Skipping M={M} C={C} L={L}: {M}^{C * L} assignments over budget")
            skipped.append((M, C, L))
            continue
        exact = exhaustive_connection_fractions(M, C, L)
        for l, value in enumerate(exact, start=1):
            closed = connection_prob(M, C, l)
            rows.append([M, C, L, l, float(value), closed, abs(float(value) - closed)])

    if not rows:
        raise TooLargeInstanceError("every requested instance exceeds LGF_MAX_ENUMERATION")

    frame = pd.DataFrame(rows, columns=COLUMNS)
    worst = float(frame["abs_error"].max())
    passed = worst <= TOLERANCE
    csv_path = write_csv(frame, output_dir(config) / "oracle.csv")
    finish(
        "oracle",
        config,
        [csv_path],
        max_abs_error=worst,
        passed=passed,
        skipped=[list(s) for s in skipped],
    )

    message = f"{len(rows)} layer checks, max |exact - closed form| = {worst:.3g}"
    if passed:
        print(CLIFormatter.success(message))
        return 0
    print(CLIFormatter.warning(message))
    return EXIT_CONFIG


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = subparsers.add_parser("oracle", parents=[parent], help="Enumerate small instances")
    p.add_argument("--M", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--C", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--L", type=int, nargs="+", default=[1, 2, 3])
