"""Monte Carlo runs: throughput, access delay or transmit power."""

from __future__ import annotations

import argparse
from dataclasses import asdict
from typing import Any, Dict, List, Optional

import pandas as pd

from ..config.settings import Settings
from ..core.analytic import layer_probabilities, success_prob
from ..core.params import to_dbm
from ..core.power import avg_power_ub_hybrid
from ..core.simulator import (
    CI99_Z,
    SCHEME_KINDS,
    SchemeConfig,
    SlotOutcome,
    simulate_avg_power,
    simulate_delay,
    simulate_throughput,
    simulate_throughput_async,
)
from ..report.experiment import check_budget
from ..report.writers import write_csv, write_records_csv
from ..utils.cli_helpers import CLIFormatter, format_table
from .common import (
    finish,
    output_dir,
    population,
    resolve_config,
    scenario,
    seed_of,
    subchannels,
)

THROUGHPUT_COLUMNS = [
    "layer",
    "attempts_mean",
    "throughput_mc",
    "ci99",
    "connection_prob_mc",
    "connection_prob_analytic",
]


async def _throughput(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    Q = population(args, config)
    M = subchannels(args, config)
    params = scenario(config, M)
    single = args.scheme in ("grant-free-oma", "coordinated-oma")
    L = 1 if single else (args.L or params.receiver_max_levels)
    scheme = SchemeConfig(kind=args.scheme, eab_enabled=args.p_E < 1.0, p_E=args.p_E, num_levels=L)
    check_budget(config.n_slots * Q)

    records: Optional[List[SlotOutcome]] = [] if args.records else None
    kwargs: Dict[str, Any] = dict(placement=args.placement, params=params, records=records)
    seed = seed_of(config)
    if Settings.LGF_PARALLEL:
        estimate = await simulate_throughput_async(scheme, M, L, Q, config.n_slots, seed, **kwargs)
    else:
        estimate = simulate_throughput(scheme, M, L, Q, config.n_slots, seed, **kwargs)

    analytic: List[float] = [float("nan")] * L
    if scheme.kind == "hybrid-layered" and Q > 0:
        analytic = [float(p) for p in layer_probabilities(M, args.p_E * Q / L, L)]
    elif scheme.kind == "grant-free-oma" and Q > 0:
        analytic = [success_prob(M, args.p_E * Q, 1)]

    mc_probs = estimate.per_layer_connection_prob()
    rows = [
        [
            l,
            estimate.per_layer_attempt_means[l - 1],
            estimate.per_layer_means[l - 1],
            CI99_Z * estimate.per_layer_std_errors[l - 1],
            mc_probs[l - 1],
            analytic[l - 1],
        ]
        for l in range(1, L + 1)
    ]
    frame = pd.DataFrame(rows, columns=THROUGHPUT_COLUMNS)
    print(CLIFormatter.header(f"{scheme.kind}: Q={Q}, M={M}, L={L}, {config.n_slots} slots"))
    print(format_table(THROUGHPUT_COLUMNS, rows))
    print(f"throughput = {estimate.mean:.6g} ± {estimate.ci99_halfwidth:.3g} (99% CI)")

    out = output_dir(config)
    outputs = [write_csv(frame, out / "simulate.csv")]
    if records is not None:
        outputs.append(write_records_csv(records, out / "simulate_records.csv"))
    finish("simulate", config, outputs, scheme=scheme, estimate=estimate)
    return 0


async def _delay(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    params = scenario(config, subchannels(args, config))
    if args.Q is not None:
        params = params.replace(num_devices=args.Q)
    L = args.L or params.receiver_max_levels
    # simulate_delay applies p_E itself
    scheme = SchemeConfig(kind=args.scheme, num_levels=L)
    check_budget(args.devices * config.n_slots)

    estimate = simulate_delay(
        scheme,
        params,
        L,
        args.p_E,
        args.devices,
        config.n_slots,
        seed_of(config),
        fixed_placement=args.fixed_placement,
    )
    summary = asdict(estimate)
    print(CLIFormatter.header(f"Access delay, {scheme.kind}, p_E={args.p_E:g}"))
    print(format_table(["quantity", "value"], summary.items()))
    if estimate.truncated:
        print(CLIFormatter.warning("run truncated: fewer than 99% of devices were served"))

    csv_path = write_csv(pd.DataFrame([summary]), output_dir(config) / "delay.csv")
    finish("delay", config, [csv_path], scheme=scheme, estimate=estimate)
    return 0


async def _power(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    M = subchannels(args, config)
    params = scenario(config, M)
    L = args.L or params.receiver_max_levels
    estimate = simulate_avg_power(params, L, M, args.samples, args.fading, seed_of(config))
    bound = avg_power_ub_hybrid(params, L, M)
    row = {
        "L": L,
        "M": M,
        "fading": args.fading,
        "mean": estimate.mean,
        "std_error": estimate.std_error,
        "mean_dbm": to_dbm(estimate.mean),
        "bound": bound,
        "bound_dbm": to_dbm(bound),
    }
    print(CLIFormatter.header(f"Average transmit power, L={L}, M={M}"))
    print(format_table(["quantity", "value"], row.items()))

    csv_path = write_csv(pd.DataFrame([row]), output_dir(config) / "power.csv")
    finish("power", config, [csv_path], estimate=estimate)
    return 0


async def run_simulate(args: argparse.Namespace) -> int:
    if args.mode == "delay":
        return await _delay(args)
    if args.mode == "power":
        return await _power(args)
    return await _throughput(args)


def add_parser(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = subparsers.add_parser("simulate", parents=[parent], help="Run Monte Carlo simulations")
    p.add_argument("--mode", choices=["throughput", "delay", "power"], default="throughput")
    p.add_argument("--scheme", choices=SCHEME_KINDS, default="hybrid-layered")
    p.add_argument("--Q", type=int, default=None, help="Number of devices (default: config)")
    p.add_argument("--M", type=int, default=None, help="Number of subchannels (default: config)")
    p.add_argument("--L", type=int, default=None, help="Number of levels (default: L_u)")
    p.add_argument("--p-e", dest="p_E", type=float, default=1.0, help="EAB parameter p_E")
    p.add_argument("--placement", choices=["disk", "balanced"], default="disk")
    p.add_argument("--records", action="store_true", help="Also write per-slot records")
    p.add_argument("--devices", type=int, default=10_000, help="Tracked devices (delay mode)")
    p.add_argument(
        "--fixed-placement", action="store_true", help="Keep each tracked device's layer fixed"
    )
    p.add_argument("--samples", type=int, default=100_000, help="Samples (power mode)")
    p.add_argument("--fading", choices=["rayleigh", "none"], default="rayleigh")
