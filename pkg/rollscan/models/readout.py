"""Rolling-shutter readout geometry."""

from enum import Enum
from typing import Optional, Dict, Any, Tuple

import numpy as np

from rollscan.common.base import BaseModel
from rollscan.common.exceptions import RowRangeError
from rollscan.constants import (
    REFERENCE_FRAMES_PER_CAPTURE,
    REFERENCE_GS_FRAME_RATE,
    REFERENCE_SENSOR_ROWS,
    SCAN_BOTTOM_TO_TOP,
    SCAN_TOP_TO_BOTTOM,
)


class ScanDirection(Enum):
    """Order in which sensor rows are read out."""

    TOP_TO_BOTTOM = SCAN_TOP_TO_BOTTOM
    BOTTOM_TO_TOP = SCAN_BOTTOM_TO_TOP


class ReadoutModel(BaseModel):
    """
    RS capture geometry.

    One RS image is composed from ``frames_per_capture`` (F) consecutive GS
    frames; sensor row r is taken from frame ``row_to_frame(r)``. The source
    burst runs at ``gs_frame_rate * F`` fps. Only F <= H is supported.
    """

    def __init__(
        self,
        sensor_rows: int,
        frames_per_capture: int,
        scan_direction: ScanDirection = ScanDirection.TOP_TO_BOTTOM,
        gs_frame_rate: float = REFERENCE_GS_FRAME_RATE,
    ) -> None:
        """Initialize ReadoutModel."""
        self.sensor_rows = sensor_rows
        self.frames_per_capture = frames_per_capture
        self.scan_direction = scan_direction
        self.gs_frame_rate = gs_frame_rate
        self.validate_or_raise()

    @classmethod
    def reference_default(cls) -> "ReadoutModel":
        """One frame per row, top to bottom, H = F = 1080 at 30 fps."""
        return cls(REFERENCE_SENSOR_ROWS, REFERENCE_FRAMES_PER_CAPTURE)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReadoutModel":
        """Create from the run-config JSON object."""
        return cls(
            sensor_rows=data["sensor_rows"],
            frames_per_capture=data["frames_per_capture"],
            scan_direction=ScanDirection(data.get("scan_direction", SCAN_TOP_TO_BOTTOM)),
            gs_frame_rate=data.get("gs_frame_rate", REFERENCE_GS_FRAME_RATE),
        )

    @property
    def source_frame_rate(self) -> float:
        """Frame rate of the GS burst feeding one RS capture."""
        return self.gs_frame_rate * self.frames_per_capture

    def row_to_frame(self, r: int) -> int:
        """Burst frame index that supplies sensor row ``r``."""
        return row_to_frame(self, r)

    def frame_map(self) -> np.ndarray:
        """Row -> frame index for every sensor row, as an int array."""
        rows = np.arange(self.sensor_rows, dtype=np.int64)
        if self.scan_direction is ScanDirection.BOTTOM_TO_TOP:
            rows = self.sensor_rows - 1 - rows
        return (rows * self.frames_per_capture) // self.sensor_rows

    def frame_time(self, k: int) -> float:
        """Time of burst frame ``k`` relative to the capture start."""
        return k / self.source_frame_rate

    def row_time(self, r: int) -> float:
        """Sampling time of sensor row ``r`` relative to the capture start."""
        return self.frame_time(self.row_to_frame(r))

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate readout model."""
        for name in ("sensor_rows", "frames_per_capture"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                return False, f"{name} must be an integer"
            if value < 1:
                return False, f"{name} must be at least 1"

        if self.frames_per_capture > self.sensor_rows:
            return False, (
                f"frames_per_capture ({self.frames_per_capture}) cannot exceed "
                f"sensor_rows ({self.sensor_rows})"
            )

        if not isinstance(self.scan_direction, ScanDirection):
            return False, "scan_direction must be a ScanDirection"

        if not isinstance(self.gs_frame_rate, (int, float)) or not self.gs_frame_rate > 0:
            return False, "gs_frame_rate must be positive"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the run-config JSON object."""
        return {
            "sensor_rows": self.sensor_rows,
            "frames_per_capture": self.frames_per_capture,
            "scan_direction": self.scan_direction.value,
            "gs_frame_rate": self.gs_frame_rate,
        }

    def __eq__(self, other: object) -> bool:
        """Value equality."""
        if not isinstance(other, ReadoutModel):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        """Hash on value."""
        return hash(tuple(self.to_dict().items()))

    def __repr__(self) -> str:
        """String representation."""
        return (
            f"ReadoutModel(H={self.sensor_rows}, F={self.frames_per_capture}, "
            f"{self.scan_direction.value}, {self.gs_frame_rate} fps)"
        )


def row_to_frame(model: ReadoutModel, r: int) -> int:
    """
    Map a sensor row to the burst frame it is read from.

    Top-to-bottom: floor(r * F / H). Bottom-to-top: floor((H - 1 - r) * F / H).
    The identity on scan position when F == H.

    Raises:
        RowRangeError: If r is outside [0, H)
    """
    rows = model.sensor_rows
    if not 0 <= r < rows:
        raise RowRangeError(r, rows)
    position = r if model.scan_direction is ScanDirection.TOP_TO_BOTTOM else rows - 1 - r
    return (position * model.frames_per_capture) // rows
