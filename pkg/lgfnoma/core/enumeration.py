"""Exhaustive small-instance oracle for the per-layer connection probability.

Every assignment of subchannels to the C·L devices is enumerated (levels are
fixed by layer) and decoded with the SIC rule, so the result is the exact
probability under independent uniform subchannel choice.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional

import numpy as np

from ..config.settings import Settings
from ..utils.error_handling import InvalidArgumentError, TooLargeInstanceError
from ..utils.validators import require_levels
from .simulator import decodable_levels

logger = logging.getLogger(__name__)

_CHUNK = 1 << 16


def enumeration_size(M: int, C: int, L: int) -> int:
    return int(M) ** (int(C) * int(L))


def exhaustive_connection_fractions(
    M: int, C: int, L: int, budget: Optional[int] = None
) -> List[Fraction]:
    """Exact per-layer success probabilities as fractions."""
    if M < 1:
        raise InvalidArgumentError(f"number of subchannels must be >= 1, got {M}")
    if C < 1:
        raise InvalidArgumentError(f"contenders per layer must be >= 1, got {C}")
    L = require_levels(L)
    limit = Settings.LGF_MAX_ENUMERATION if budget is None else budget
    total = enumeration_size(M, C, L)
    if total > limit:
        raise TooLargeInstanceError(
            f"M^(C*L) = {M}^{C * L} = {total} assignments exceeds the enumeration budget {limit}"
        )

    K = C * L
    levels = np.repeat(np.arange(L), C)
    place = M ** np.arange(K, dtype=np.int64)
    wins = np.zeros(L, dtype=np.int64)

    for start in range(0, total, _CHUNK):
        index = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        n = index.size
        channels = (index[:, np.newaxis] // place) % M
        rows = np.arange(n)[:, np.newaxis]
        cell = (rows * M + channels) * L + levels
        counts = np.bincount(cell.ravel(), minlength=n * M * L)
        ok = decodable_levels(counts.reshape(n, M, L)).reshape(-1)[cell]
        wins += np.bincount(np.broadcast_to(levels, ok.shape)[ok], minlength=L)

    logger.debug("Enumerated %d assignments for M=%d C=%d L=%d", total, M, C, L)
    return [Fraction(int(w), C * total) for w in wins]


def exhaustive_connection_prob(M: int, C: int, L: int) -> List[float]:
    """Per-layer connection probability of a tagged device, by full enumeration."""
    return [float(f) for f in exhaustive_connection_fractions(M, C, L)]
