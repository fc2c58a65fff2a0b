"""Slot-level Monte Carlo engine for layered grant-free NOMA and its baselines.

Decoding is combinatorial: on each subchannel the receiver walks the power
levels from strongest to weakest, decodes a level holding exactly one
signal, skips empty levels, and stops at the first level holding two or more
signals (a power collision). Everything below a collision is lost.

All randomness comes from ``RngSpec`` streams, so a run is a pure function of
its seed. Long runs are split into replications that can execute on worker
threads; their integer tallies are merged in stream order, which makes the
threaded and serial paths bit-identical.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..config.settings import Settings
from ..utils.error_handling import InvalidArgumentError, UnsupportedError
from ..utils.validators import (
    AccessProbability,
    FadingModel,
    Placement,
    PositiveCount,
    SchemeKind,
    require_levels,
    require_probability,
)
from .params import LayerPlan, SystemParams, build_layer_plan, layers_of, tx_powers

logger = logging.getLogger(__name__)

CI99_Z = 2.576

# Upper bound on array cells materialised per vectorised batch.
_MAX_BATCH_CELLS = 2_000_000

SCHEME_KINDS: Tuple[str, ...] = (
    "hybrid-layered",
    "random-noma",
    "grant-free-oma",
    "coordinated-oma",
)


@dataclass(frozen=True)
class RngSpec:
    """Reproducible random stream: identical specs yield identical draws."""

    master_seed: int
    stream_index: int = 0
    path: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed < 2**64:
            raise InvalidArgumentError(
                f"master_seed must be a 64-bit unsigned value, got {self.master_seed}"
            )
        if self.stream_index < 0:
            raise InvalidArgumentError(f"stream_index must be >= 0, got {self.stream_index}")

    def child(self, index: int) -> "RngSpec":
        return RngSpec(self.master_seed, self.stream_index, self.path + (int(index),))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,) + self.path)
        return np.random.default_rng(seq)


class SchemeConfig(BaseModel):
    """Which access scheme to simulate and whether EAB gating is applied."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SchemeKind
    eab_enabled: bool = False
    p_E: AccessProbability = 1.0
    num_levels: PositiveCount = 1

    @model_validator(mode="before")
    @classmethod
    def _single_level_oma(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("kind") == "grant-free-oma":
            data = dict(data)
            data["num_levels"] = 1
        return data

    @property
    def gate_probability(self) -> float:
        return self.p_E if self.eab_enabled else 1.0

    def replace(self, **changes: object) -> "SchemeConfig":
        data = self.model_dump()
        data.update(changes)
        return SchemeConfig.model_validate(data)


@dataclass(frozen=True)
class SlotOutcome:
    """Per-slot, per-layer tallies from the decoder."""

    attempts_per_layer: Tuple[int, ...]
    successes_per_layer: Tuple[int, ...]
    power_collision_events: int
    blocked_by_eab: int
    collisions_per_layer: Tuple[int, ...] = ()

    @property
    def successes(self) -> int:
        return int(sum(self.successes_per_layer))


@dataclass(frozen=True)
class ThroughputEstimate:
    """Mean decoded devices per slot with its sampling error."""

    mean: float
    std_error: float
    ci99_halfwidth: float
    n_slots: int
    per_layer_means: Tuple[float, ...]
    per_layer_std_errors: Tuple[float, ...] = ()
    per_layer_attempt_means: Tuple[float, ...] = ()
    blocked_mean: float = 0.0

    def per_layer_connection_prob(self) -> Tuple[float, ...]:
        """Decoded fraction of attempts per layer (0 where a layer saw no attempts)."""
        return tuple(
            s / a if a > 0 else 0.0
            for s, a in zip(self.per_layer_means, self.per_layer_attempt_means)
        )

    def per_layer_prob_ci99(self) -> Tuple[float, ...]:
        return tuple(
            CI99_Z * se / a if a > 0 else 0.0
            for se, a in zip(self.per_layer_std_errors, self.per_layer_attempt_means)
        )

    @property
    def attempt_mean(self) -> float:
        return float(sum(self.per_layer_attempt_means))

    @property
    def success_ratio(self) -> float:
        """Decoded fraction of all transmissions."""
        attempts = self.attempt_mean
        return self.mean / attempts if attempts > 0 else 0.0


@dataclass(frozen=True)
class DelayEstimate:
    avg_delay_ms: float
    mean_slots: float
    median_slots: float
    p95_slots: float
    served_fraction: float
    n_devices: int
    truncated: bool


@dataclass(frozen=True)
class PowerEstimate:
    mean: float
    std_error: float
    n_samples: int


@dataclass
class _Tally:
    """Integer sums over slots; merging is exact, hence order-independent."""

    n_slots: int
    levels: int
    successes: np.ndarray = field(init=False)
    successes_sq: np.ndarray = field(init=False)
    attempts: np.ndarray = field(init=False)
    total_sq: int = 0
    blocked: int = 0
    records: List[SlotOutcome] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.successes = np.zeros(self.levels, dtype=np.int64)
        self.successes_sq = np.zeros(self.levels, dtype=np.int64)
        self.attempts = np.zeros(self.levels, dtype=np.int64)

    def add(self, batch: "_Batch") -> None:
        self.successes += batch.successes.sum(axis=0)
        self.successes_sq += (batch.successes.astype(np.int64) ** 2).sum(axis=0)
        self.attempts += batch.attempts.sum(axis=0)
        totals = batch.successes.sum(axis=1).astype(np.int64)
        self.total_sq += int((totals**2).sum())
        self.blocked += int(batch.blocked.sum())

    def merge(self, other: "_Tally") -> None:
        self.n_slots += other.n_slots
        self.successes += other.successes
        self.successes_sq += other.successes_sq
        self.attempts += other.attempts
        self.total_sq += other.total_sq
        self.blocked += other.blocked
        self.records.extend(other.records)

    def estimate(self) -> ThroughputEstimate:
        n = self.n_slots
        total = float(self.successes.sum())
        mean = total / n
        std_error = _std_error(total, float(self.total_sq), n)
        layer_se = tuple(
            _std_error(float(s), float(sq), n) for s, sq in zip(self.successes, self.successes_sq)
        )
        return ThroughputEstimate(
            mean=mean,
            std_error=std_error,
            ci99_halfwidth=CI99_Z * std_error,
            n_slots=n,
            per_layer_means=tuple(float(s) / n for s in self.successes),
            per_layer_std_errors=layer_se,
            per_layer_attempt_means=tuple(float(a) / n for a in self.attempts),
            blocked_mean=self.blocked / n,
        )


def _std_error(total: float, total_sq: float, n: int) -> float:
    if n < 2:
        return 0.0
    var = max(total_sq - total * total / n, 0.0) / (n - 1)
    return math.sqrt(var / n)


@dataclass
class _Batch:
    attempts: np.ndarray
    successes: np.ndarray
    collisions: np.ndarray
    blocked: np.ndarray

    def outcomes(self) -> List[SlotOutcome]:
        return [
            SlotOutcome(
                attempts_per_layer=tuple(int(x) for x in self.attempts[b]),
                successes_per_layer=tuple(int(x) for x in self.successes[b]),
                power_collision_events=int(self.collisions[b].sum()),
                blocked_by_eab=int(self.blocked[b]),
                collisions_per_layer=tuple(int(x) for x in self.collisions[b]),
            )
            for b in range(self.attempts.shape[0])
        ]


def decodable_levels(counts: np.ndarray) -> np.ndarray:
    """Mask of decoded levels given per-level occupant counts on the last axis."""
    collided = counts >= 2
    earlier = np.cumsum(collided, axis=-1) - collided
    return (counts == 1) & (earlier == 0)


def sic_decode(occupancy: Sequence[Sequence[int]], L: int) -> List[set[int]]:
    """Decoded (1-based) levels per subchannel from per-level occupant counts."""
    L = require_levels(L)
    counts = np.asarray(occupancy, dtype=np.int64)
    if counts.ndim != 2 or counts.shape[1] != L:
        raise InvalidArgumentError(f"occupancy must have shape (M, {L}), got {counts.shape}")
    if np.any(counts < 0):
        raise InvalidArgumentError("occupant counts must be >= 0")
    mask = decodable_levels(counts)
    return [{int(l) + 1 for l in np.flatnonzero(row)} for row in mask]


def _per_row_counts(
    rows: np.ndarray, cols: np.ndarray, weights: np.ndarray, shape: Tuple[int, int]
) -> np.ndarray:
    flat = np.bincount(
        (rows * shape[1] + cols).ravel(),
        weights=weights.ravel().astype(float),
        minlength=shape[0] * shape[1],
    )
    return flat.reshape(shape).astype(np.int64)


def _resolve(
    rng: np.random.Generator,
    scheme: SchemeConfig,
    M: int,
    L: int,
    layers: np.ndarray,
    active: np.ndarray,
) -> _Batch:
    """Resolve a batch of slots; ``layers`` is 1-based with shape (B, Q)."""
    B, Q = layers.shape
    rows = np.broadcast_to(np.arange(B)[:, np.newaxis], (B, Q))

    if scheme.eab_enabled:
        gated = active & (rng.random((B, Q)) < scheme.p_E)
    else:
        gated = active.copy()
    blocked = (active & ~gated).sum(axis=1)

    if scheme.kind == "random-noma":
        levels = rng.integers(0, L, size=(B, Q))
    elif scheme.kind == "grant-free-oma":
        levels = np.zeros((B, Q), dtype=np.int64)
    else:
        levels = layers.astype(np.int64) - 1

    attempts = _per_row_counts(rows, levels, gated, (B, L))

    if scheme.kind == "coordinated-oma":
        # The base station schedules min(M, contenders) devices at random.
        keys = np.where(gated, rng.random((B, Q)), np.inf)
        order = np.argsort(keys, axis=1, kind="stable")
        rank = np.empty_like(order)
        np.put_along_axis(rank, order, np.arange(Q)[np.newaxis, :].repeat(B, axis=0), axis=1)
        served = gated & (rank < M)
        collisions = np.zeros((B, L), dtype=np.int64)
    else:
        channels = rng.integers(0, M, size=(B, Q))
        cell = (rows * M + channels) * L + levels
        counts = np.bincount(cell[gated], minlength=B * M * L).reshape(B, M, L)
        ok = decodable_levels(counts).reshape(-1)
        served = gated & ok[cell]
        collisions = (counts >= 2).sum(axis=1).astype(np.int64)

    successes = _per_row_counts(rows, levels, served, (B, L))
    return _Batch(attempts=attempts, successes=successes, collisions=collisions, blocked=blocked)


def _scheme_levels(scheme: SchemeConfig, L: Optional[int]) -> int:
    if scheme.kind == "grant-free-oma":
        return 1
    return require_levels(scheme.num_levels if L is None else L)


def run_slot(
    scheme: SchemeConfig,
    M: int,
    devices: Sequence[Tuple[int, bool]],
    rng: Union[np.random.Generator, RngSpec],
) -> SlotOutcome:
    """Resolve one slot for explicit (layer, active) devices."""
    if scheme.kind not in SCHEME_KINDS:
        raise InvalidArgumentError(f"unknown scheme kind: {scheme.kind}")
    if M < 1:
        raise InvalidArgumentError(f"number of subchannels must be >= 1, got {M}")
    generator = rng.generator() if isinstance(rng, RngSpec) else rng
    layer_list = [int(layer) for layer, _ in devices]
    if any(layer < 1 for layer in layer_list):
        raise InvalidArgumentError("device layers must be >= 1")
    if scheme.kind == "coordinated-oma":
        L = max([1] + layer_list)
    else:
        L = _scheme_levels(scheme, None)
        if scheme.kind != "grant-free-oma" and any(layer > L for layer in layer_list):
            raise InvalidArgumentError(f"device layers must lie in 1..{L}")
    layers = np.asarray(layer_list, dtype=np.int64).reshape(1, -1)
    active = np.asarray([bool(a) for _, a in devices], dtype=bool).reshape(1, -1)
    return _resolve(generator, scheme, M, L, layers, active).outcomes()[0]


def _batch_size(Q: int, M: int, L: int) -> int:
    return max(1, _MAX_BATCH_CELLS // max(Q, M * L, 1))


def _run_replication(
    scheme: SchemeConfig,
    M: int,
    L: int,
    Q: int,
    n_slots: int,
    spec: RngSpec,
    placement: Placement,
    plan: LayerPlan,
    keep_records: bool,
) -> _Tally:
    rng = spec.generator()
    tally = _Tally(n_slots=n_slots, levels=L)
    batch = _batch_size(Q, M, L)
    balanced = np.arange(Q) % plan.num_levels + 1
    done = 0
    while done < n_slots:
        B = min(batch, n_slots - done)
        if placement == "disk":
            distances = plan.cell_radius * np.sqrt(rng.random((B, Q)))
            layers = layers_of(distances, plan)
        else:
            layers = np.broadcast_to(balanced, (B, Q))
        active = np.ones((B, Q), dtype=bool)
        result = _resolve(rng, scheme, M, L, layers, active)
        tally.add(result)
        if keep_records:
            tally.records.extend(result.outcomes())
        done += B
    return tally


def _plan_replications(
    scheme: SchemeConfig,
    M: int,
    L: Optional[int],
    Q: int,
    n_slots: int,
    params: Optional[SystemParams],
    replication_slots: Optional[int],
) -> Tuple[int, LayerPlan, List[int]]:
    if n_slots < 1:
        raise InvalidArgumentError(f"n_slots must be >= 1, got {n_slots}")
    if Q < 0:
        raise InvalidArgumentError(f"number of devices must be >= 0, got {Q}")
    if M < 1:
        raise InvalidArgumentError(f"number of subchannels must be >= 1, got {M}")
    levels = _scheme_levels(scheme, L)
    plan = build_layer_plan(params or SystemParams(), levels)
    per_rep = replication_slots or Settings.LGF_REPLICATION_SLOTS
    sizes = [min(per_rep, n_slots - start) for start in range(0, n_slots, per_rep)]
    return levels, plan, sizes


def _merge(tallies: Iterable[_Tally], levels: int) -> _Tally:
    merged = _Tally(n_slots=0, levels=levels)
    for tally in tallies:
        merged.merge(tally)
    return merged


def simulate_throughput(
    scheme: SchemeConfig,
    M: int,
    L: Optional[int],
    Q: int,
    n_slots: int,
    seed: RngSpec,
    *,
    placement: Placement = "disk",
    params: Optional[SystemParams] = None,
    records: Optional[List[SlotOutcome]] = None,
    replication_slots: Optional[int] = None,
) -> ThroughputEstimate:
    """Mean decoded devices per slot over ``n_slots`` saturated slots.

    ``placement="disk"`` redraws every device uniformly in the cell each slot;
    ``"balanced"`` splits the Q devices evenly over the layers.
    """
    levels, plan, sizes = _plan_replications(scheme, M, L, Q, n_slots, params, replication_slots)
    tallies = [
        _run_replication(
            scheme, M, levels, Q, size, seed.child(i), placement, plan, records is not None
        )
        for i, size in enumerate(sizes)
    ]
    merged = _merge(tallies, levels)
    if records is not None:
        records.extend(merged.records)
    return merged.estimate()


async def simulate_throughput_async(
    scheme: SchemeConfig,
    M: int,
    L: Optional[int],
    Q: int,
    n_slots: int,
    seed: RngSpec,
    *,
    placement: Placement = "disk",
    params: Optional[SystemParams] = None,
    records: Optional[List[SlotOutcome]] = None,
    replication_slots: Optional[int] = None,
) -> ThroughputEstimate:
    """Threaded variant of simulate_throughput with identical results."""
    levels, plan, sizes = _plan_replications(scheme, M, L, Q, n_slots, params, replication_slots)
    tallies = await asyncio.gather(
        *(
            asyncio.to_thread(
                _run_replication,
                scheme,
                M,
                levels,
                Q,
                size,
                seed.child(i),
                placement,
                plan,
                records is not None,
            )
            for i, size in enumerate(sizes)
        )
    )
    merged = _merge(tallies, levels)
    if records is not None:
        records.extend(merged.records)
    return merged.estimate()


def _tagged_success(
    rng: np.random.Generator,
    scheme: SchemeConfig,
    M: int,
    L: int,
    per_layer: int,
    contenders: int,
    tagged_layers: Optional[np.ndarray],
    n: int,
) -> np.ndarray:
    """Whether each of ``n`` tagged devices is decoded in one contended slot."""
    if scheme.kind == "coordinated-oma":
        return rng.random(n) < min(1.0, M / contenders)

    rows = np.arange(n)
    if scheme.kind == "hybrid-layered":
        layer = rng.integers(0, L, size=n) if tagged_layers is None else tagged_layers
        channels = rng.integers(0, M, size=(n, L * per_layer))
        tagged_ch = channels[rows, layer * per_layer]
        hits = (channels == tagged_ch[:, np.newaxis]).reshape(n, L, per_layer).sum(axis=2)
        return decodable_levels(hits)[rows, layer]

    levels_count = 1 if scheme.kind == "grant-free-oma" else L
    if scheme.kind == "random-noma":
        levels = rng.integers(0, levels_count, size=(n, contenders))
    else:
        levels = np.zeros((n, contenders), dtype=np.int64)
    channels = rng.integers(0, M, size=(n, contenders))
    match = channels == channels[:, :1]
    hits = _per_row_counts(
        np.broadcast_to(rows[:, np.newaxis], levels.shape), levels, match, (n, levels_count)
    )
    return decodable_levels(hits)[rows, levels[:, 0]]


def simulate_delay(
    scheme: SchemeConfig,
    params: SystemParams,
    L: int,
    p_E: float,
    n_devices: int,
    n_slots: int,
    seed: RngSpec,
    *,
    fixed_placement: bool = False,
) -> DelayEstimate:
    """Slots until first success for tracked devices retrying every slot.

    Each tracked device faces a saturated population of round(p_E·Q/L)
    contenders per layer. Its layer is redrawn each slot unless
    ``fixed_placement`` pins it for the whole run.
    """
    require_probability("p_E", p_E, allow_zero=True)
    if n_devices < 1 or n_slots < 1:
        raise InvalidArgumentError("n_devices and n_slots must be >= 1")
    M = params.num_subchannels
    Q = params.num_devices
    L = 1 if scheme.kind == "grant-free-oma" else require_levels(L)
    per_layer = max(1, int(round(p_E * Q / L)))
    if scheme.kind in ("hybrid-layered", "random-noma"):
        contenders = per_layer * L
    else:
        contenders = max(1, int(round(p_E * Q)))

    rng = seed.generator()
    fixed_layers = rng.integers(0, L, size=n_devices) if fixed_placement else None
    slots_needed = np.zeros(n_devices, dtype=np.int64)
    waiting = np.arange(n_devices)
    chunk = max(1, _MAX_BATCH_CELLS // max(contenders, 1))

    for slot in range(1, n_slots + 1):
        if waiting.size == 0:
            break
        gated = waiting[rng.random(waiting.size) < p_E]
        decoded: List[np.ndarray] = []
        for start in range(0, gated.size, chunk):
            part = gated[start : start + chunk]
            layers = None if fixed_layers is None else fixed_layers[part]
            ok = _tagged_success(rng, scheme, M, L, per_layer, contenders, layers, part.size)
            decoded.append(part[ok])
        if decoded:
            done = np.concatenate(decoded)
            slots_needed[done] = slot
            waiting = np.setdiff1d(waiting, done, assume_unique=True)

    served = slots_needed[slots_needed > 0]
    served_fraction = served.size / n_devices
    truncated = served_fraction < 0.99
    if truncated:
        logger.warning(
            "Delay run truncated: %.1f%% of %d devices served within %d slots",
            100 * served_fraction,
            n_devices,
            n_slots,
        )
    if served.size == 0:
        return DelayEstimate(
            avg_delay_ms=math.inf,
            mean_slots=math.inf,
            median_slots=math.inf,
            p95_slots=math.inf,
            served_fraction=0.0,
            n_devices=n_devices,
            truncated=True,
        )
    mean_slots = float(served.mean())
    return DelayEstimate(
        avg_delay_ms=mean_slots * params.slot_period_ms,
        mean_slots=mean_slots,
        median_slots=float(np.median(served)),
        p95_slots=float(np.percentile(served, 95)),
        served_fraction=served_fraction,
        n_devices=n_devices,
        truncated=truncated,
    )


def simulate_avg_power(
    params: SystemParams,
    L: int,
    M: int,
    n_samples: int,
    fading: FadingModel = "rayleigh",
    seed: Optional[RngSpec] = None,
) -> PowerEstimate:
    """Sample mean of the transmit power P = v_l / max_i g_i over random devices."""
    if M < 2:
        raise UnsupportedError(f"average power sampling needs M >= 2, got M={M}")
    if n_samples < 1:
        raise InvalidArgumentError(f"n_samples must be >= 1, got {n_samples}")
    if fading not in ("rayleigh", "none"):
        raise InvalidArgumentError(f"unknown fading model: {fading}")
    plan = build_layer_plan(params, L)
    levels = np.asarray(plan.power_levels)
    beta = params.pathloss_exponent
    rng = (seed or RngSpec(Settings.LGF_SEED)).generator()
    batch = max(1, _MAX_BATCH_CELLS // M)

    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        b = min(batch, n_samples - done)
        d = params.cell_radius * np.sqrt(rng.random(b))
        v = levels[layers_of(d, plan) - 1]
        fade = rng.exponential(1.0, size=(b, M)) if fading == "rayleigh" else np.ones((b, 1))
        # d = 0 gives an infinite gain and zero transmit power
        with np.errstate(divide="ignore"):
            gains = params.antenna_constant * fade / (d**beta)[:, None]
        power, _ = tx_powers(v, gains)
        total += float(power.sum())
        total_sq += float((power**2).sum())
        done += b

    mean = total / n_samples
    return PowerEstimate(
        mean=mean, std_error=_std_error(total, total_sq, n_samples), n_samples=n_samples
    )
