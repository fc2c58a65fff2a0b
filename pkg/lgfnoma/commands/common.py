"""Helpers shared by the subcommands."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Iterable, Optional

from ..config.config_loader import ExperimentConfig, load_experiment_config
from ..core.params import SystemParams
from ..core.simulator import RngSpec
from ..report.writers import write_summary
from ..utils.monitoring import get_metrics_collector


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file (if any) with command-line overrides applied."""
    return load_experiment_config(
        getattr(args, "config", None),
        master_seed=getattr(args, "seed", None),
        n_slots=getattr(args, "slots", None),
        grid_step=getattr(args, "grid_step", None),
        output_dir=getattr(args, "out", None),
    )


def output_dir(config: ExperimentConfig) -> Path:
    return Path(config.output_dir)


def seed_of(config: ExperimentConfig, stream: int = 0) -> RngSpec:
    return RngSpec(config.master_seed, stream)


def finish(
    name: str,
    config: ExperimentConfig,
    outputs: Iterable[Path],
    **sections: Any,
) -> Path:
    """Write ``<name>.json`` next to the CSV outputs."""
    return write_summary(
        output_dir(config) / f"{name}.json",
        config=config.model_dump(mode="json"),
        outputs=list(outputs),
        runtime=get_metrics_collector().summary(),
        **sections,
    )


def population(args: argparse.Namespace, config: ExperimentConfig) -> int:
    value: Optional[int] = getattr(args, "Q", None)
    return config.system.num_devices if value is None else value


def subchannels(args: argparse.Namespace, config: ExperimentConfig) -> int:
    value: Optional[int] = getattr(args, "M", None)
    return config.system.num_subchannels if value is None else value


def scenario(config: ExperimentConfig, M: int) -> SystemParams:
    """Configured system parameters re-derived at M subchannels."""
    if M == config.system.num_subchannels:
        return config.system
    return config.system.with_subchannels(M)
