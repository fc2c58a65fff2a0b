"""Signaling overhead of broadcast access control versus per-device connection setup."""

from pydantic import BaseModel, ConfigDict, computed_field

from ..core.params import SystemParams
from ..utils.error_handling import InvalidArgumentError


class OverheadReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    Q_success: int
    hybrid_bytes: float
    coordinated_bytes: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ratio(self) -> float:
        return self.hybrid_bytes / self.coordinated_bytes


def overhead_report(Q_success: int, params: SystemParams) -> OverheadReport:
    """One broadcast per slot against one setup exchange per served device."""
    if int(Q_success) != Q_success or Q_success < 1:
        raise InvalidArgumentError(f"Q_success must be an integer >= 1, got {Q_success}")
    return OverheadReport(
        Q_success=int(Q_success),
        hybrid_bytes=params.broadcast_overhead_bytes,
        coordinated_bytes=Q_success * params.connection_setup_bytes,
    )
