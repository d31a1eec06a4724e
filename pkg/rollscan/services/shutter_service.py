"""Rolling-shutter composition by row substitution."""

import logging
from typing import Callable, Tuple

import numpy as np

from rollscan.common.exceptions import DataValidationError
from rollscan.models.image import FrameSequence, ImageBuffer
from rollscan.models.readout import ReadoutModel, row_to_frame

logger = logging.getLogger(__name__)

__all__ = [
    "row_to_frame",
    "compose_rs",
    "compose_gs",
    "capture_pair",
    "compose_rs_streaming",
]


def _check_burst(seq: FrameSequence, model: ReadoutModel) -> None:
    if len(seq) < model.frames_per_capture:
        raise DataValidationError(
            f"Burst has {len(seq)} frames, readout needs {model.frames_per_capture}",
            {"frames": len(seq), "frames_per_capture": model.frames_per_capture},
        )
    if seq.height != model.sensor_rows:
        raise DataValidationError(
            f"Frame height {seq.height} does not match sensor_rows {model.sensor_rows}",
            {"height": seq.height, "sensor_rows": model.sensor_rows},
        )


def compose_rs(seq: FrameSequence, model: ReadoutModel) -> ImageBuffer:
    """
    Compose a rolling-shutter image from a GS burst.

    Output row r is row r of burst frame ``row_to_frame(model, r)``.

    Args:
        seq: Burst of at least F frames of height H
        model: Readout model

    Returns:
        RS image with the burst's dimensions

    Raises:
        DataValidationError: If the burst is too short or its height differs from H
    """
    _check_burst(seq, model)
    frame_map = model.frame_map()
    out = np.empty((seq.height, seq.width, 3), dtype=np.uint8)
    for k in np.unique(frame_map):
        rows = frame_map == k
        out[rows] = seq[int(k)].pixels[rows]
    logger.debug(f"Composed RS image from {model.frames_per_capture} frames")
    return ImageBuffer(out)


def compose_gs(seq: FrameSequence, model: ReadoutModel) -> ImageBuffer:
    """
    Global-shutter image of a capture: burst frame 0, unmodified.

    Raises:
        DataValidationError: If the burst is empty
    """
    if len(seq) == 0:
        raise DataValidationError("Burst is empty")
    return seq[0]


def capture_pair(seq: FrameSequence, model: ReadoutModel) -> Tuple[ImageBuffer, ImageBuffer]:
    """(GS, RS) images composed from the same burst."""
    rs = compose_rs(seq, model)
    gs = compose_gs(seq, model)
    return gs, rs


def compose_rs_streaming(
    render: Callable[[int], ImageBuffer],
    model: ReadoutModel,
) -> ImageBuffer:
    """
    Compose an RS image without holding the whole burst in memory.

    ``render(k)`` must return burst frame k; each needed frame is requested
    exactly once, in increasing k, and only its mapped rows are kept. The
    result equals ``compose_rs`` on the materialised burst.

    Raises:
        DataValidationError: If a rendered frame's height differs from H
    """
    frame_map = model.frame_map()
    out = None
    for k in np.unique(frame_map):
        frame = render(int(k))
        if frame.height != model.sensor_rows:
            raise DataValidationError(
                f"Frame height {frame.height} does not match sensor_rows {model.sensor_rows}"
            )
        if out is None:
            out = np.empty((frame.height, frame.width, 3), dtype=np.uint8)
        rows = frame_map == k
        out[rows] = frame.pixels[rows]
    return ImageBuffer(out)
