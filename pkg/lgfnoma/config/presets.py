"""Evaluation defaults and per-figure sweep presets."""

from typing import Dict, Tuple

from ..core.params import SystemParams

DEFAULT_SYSTEM = SystemParams()

FIG3_LEVELS = 5
FIG3_TOTAL_CONTENDERS: Tuple[int, ...] = (200, 500)
FIG3_SLOTS = 20_000

FIG4A_LEVELS: Tuple[int, ...] = tuple(range(1, 9))
FIG4B_SUBCHANNELS: Tuple[int, ...] = (2, 4, 8, 12, 16, 24, 32, 48, 64, 96)
FIG4C_SUCCESSES: Tuple[int, ...] = tuple(range(4, 101, 4))

FIG5_DEVICES: Tuple[int, ...] = tuple(range(50, 501, 50))
FIG5_SLOTS = 10_000

FIGURE_DESCRIPTIONS: Dict[str, str] = {
    "fig3": "per-layer connection throughput, closed form vs simulation",
    "fig4a": "average transmit power vs number of levels",
    "fig4b": "average transmit power vs number of subchannels",
    "fig4c": "signaling overhead vs successful devices",
    "fig5": "optimised connection throughput vs number of devices",
}
