"""CSV and JSON emission with byte-stable formatting."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from ..core.simulator import SlotOutcome

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
RECORD_COLUMNS = ["slot", "layer", "attempts", "successes", "power_collisions"]


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write ``frame`` with 12 significant digits and LF line endings."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def records_frame(records: Sequence[SlotOutcome]) -> pd.DataFrame:
    rows = []
    for slot, outcome in enumerate(records, start=1):
        collisions = outcome.collisions_per_layer or (0,) * len(outcome.attempts_per_layer)
        for layer, (a, s, c) in enumerate(
            zip(outcome.attempts_per_layer, outcome.successes_per_layer, collisions), start=1
        ):
            rows.append((slot, layer, a, s, c))
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


def write_records_csv(records: Sequence[SlotOutcome], path: Path) -> Path:
    return write_csv(records_frame(records), path)


def _jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _jsonable(value.model_dump(mode="python"))
    if is_dataclass(value) and not isinstance(value, type):
        return _jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return value


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_json(payload: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_jsonable(payload), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote summary to {path}")
    return path


def metrics_path(summary_path: Path) -> Path:
    """``<name>.metrics.json`` next to ``<name>.json``."""
    return summary_path.with_suffix(".metrics.json")


def write_summary(
    path: Path,
    config: Any,
    outputs: Iterable[Path],
    runtime: Optional[Dict[str, Any]] = None,
    **sections: Any,
) -> Path:
    """JSON run summary: resolved config, timestamp, outputs and extra sections.

    The summary holds only values fixed by the config and seed, so reruns differ
    in ``timestamp`` alone. Timings and process figures go to a separate
    ``<name>.metrics.json``.
    """
    written = [str(p) for p in outputs] + [str(path)]
    if runtime is not None:
        written.append(str(write_json({"runtime": runtime}, metrics_path(path))))
    payload: Dict[str, Any] = {
        "config": config,
        "timestamp": utc_timestamp(),
        "outputs": written,
    }
    payload.update(sections)
    return write_json(payload, path)
