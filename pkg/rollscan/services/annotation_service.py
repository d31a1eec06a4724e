"""RS ground-truth transform and dataset statistics."""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from rollscan.common.exceptions import DataValidationError
from rollscan.constants import FRAGMENT_POLICY_MERGE, FRAGMENT_POLICY_SPLIT, FRAGMENT_POLICIES
from rollscan.models.annotation import BBox, DetectionSet, GroundTruthSet, Track
from rollscan.models.readout import ReadoutModel

logger = logging.getLogger(__name__)


def _check_track(track: Track, model: ReadoutModel) -> None:
    if len(track) < model.frames_per_capture:
        raise DataValidationError(
            f"Track {track.actor_id} has {len(track)} boxes, readout needs {model.frames_per_capture}",
            {"actor_id": track.actor_id, "boxes": len(track)},
        )


def transform_track_to_rs(
    track: Track,
    model: ReadoutModel,
    image: Tuple[int, int],
    policy: str = FRAGMENT_POLICY_SPLIT,
) -> List[BBox]:
    """
    RS-space GT boxes of one actor.

    Each sensor row r is intersected with the actor's box in the row's
    source frame; a row is occupied when the box covers the row centre.
    Maximal runs of occupied rows become one box each: the x extent is the
    union of the per-row extents, the y extent runs from the first row's box
    top to the last row's box bottom. Where that box also covers the row
    outside the run, the edge is cut to the run's row boundary instead. A
    static track therefore yields exactly its own box. Boxes are clamped to
    the image.

    Args:
        track: Per-frame boxes of the actor (at least F)
        model: Readout model
        image: (width, height); height must equal sensor_rows
        policy: "split" (one box per run) or "merge" (one enclosing box)

    Returns:
        Zero or more boxes, in row order

    Raises:
        DataValidationError: On track/model length or image/model height mismatch
    """
    width, height = image
    _check_track(track, model)
    if height != model.sensor_rows:
        raise DataValidationError(
            f"Image height {height} does not match sensor_rows {model.sensor_rows}",
            {"height": height, "sensor_rows": model.sensor_rows},
        )
    if policy not in FRAGMENT_POLICIES:
        raise DataValidationError(f"Unknown fragment policy '{policy}'")

    frame_map = model.frame_map()
    spans = [box.row_span() for box in track.boxes[: model.frames_per_capture]]

    # run: [first row, last row, x_min, x_max, top, bottom]
    runs: List[List[float]] = []
    open_run: Optional[List[float]] = None
    for r in range(height):
        k = int(frame_map[r])
        start, stop = spans[k]
        if start <= r < stop:
            box = track.boxes[k]
            if open_run is None:
                # cut at the row edge only when the box reaches the row above
                top = box.y_min if start == r else float(r)
                open_run = [r, r, box.x_min, box.x_max, top, 0.0]
                runs.append(open_run)
            else:
                open_run[1] = r
                open_run[2] = min(open_run[2], box.x_min)
                open_run[3] = max(open_run[3], box.x_max)
            open_run[5] = box.y_max if stop == r + 1 else float(r + 1)
        else:
            open_run = None

    class_id = track.boxes[0].class_id
    boxes = [
        BBox(float(x0), float(top), float(x1), float(bottom), class_id)
        for _, _, x0, x1, top, bottom in runs
    ]
    if policy == FRAGMENT_POLICY_MERGE and boxes:
        boxes = [
            BBox(
                min(b.x_min for b in boxes),
                boxes[0].y_min,
                max(b.x_max for b in boxes),
                boxes[-1].y_max,
                class_id,
            )
        ]

    clamped = [box.clamp(width, height) for box in boxes]
    result = [box for box in clamped if not box.is_empty()]
    if len(result) > 1:
        logger.debug(f"Actor {track.actor_id} split into {len(result)} RS fragments")
    return result


def gs_boxes(tracks: Sequence[Track], image: Tuple[int, int]) -> List[BBox]:
    """
    Burst-frame-0 boxes of every track, clamped.

    Boxes that cover no raster row centre inside the image are dropped, as
    they render no pixels and the RS transform never emits them.
    """
    clamped = [track.boxes[0].clamp(image[0], image[1]) for track in tracks]
    return [box for box in clamped if not box.is_empty() and _covers_row(box)]


def _covers_row(box: BBox) -> bool:
    start, stop = box.row_span()
    return stop > start


def rs_boxes(
    tracks: Sequence[Track],
    model: ReadoutModel,
    image: Tuple[int, int],
    policy: str = FRAGMENT_POLICY_SPLIT,
) -> List[BBox]:
    """RS boxes of every track, concatenated in track order."""
    return [box for track in tracks for box in transform_track_to_rs(track, model, image, policy)]


def transform_gt_gs(
    tracks: Sequence[Track],
    model: ReadoutModel,
    image: Tuple[int, int],
    image_id: str,
) -> GroundTruthSet:
    """
    GS ground truth of one capture: each track's frame-0 box, clamped.

    Raises:
        DataValidationError: If a track is shorter than F
    """
    for track in tracks:
        _check_track(track, model)
    gts = GroundTruthSet()
    gts.add_image(image_id, image[0], image[1])
    gts.add_all(image_id, gs_boxes(tracks, image))
    return gts


def transform_gt_rs(
    tracks: Sequence[Track],
    model: ReadoutModel,
    image: Tuple[int, int],
    image_id: str,
    policy: str = FRAGMENT_POLICY_SPLIT,
) -> GroundTruthSet:
    """RS ground truth of one capture via ``transform_track_to_rs``."""
    gts = GroundTruthSet()
    gts.add_image(image_id, image[0], image[1])
    gts.add_all(image_id, rs_boxes(tracks, model, image, policy))
    return gts


def merge_ground_truth(parts: Sequence[GroundTruthSet]) -> GroundTruthSet:
    """Union of per-capture GT sets (image ids must not collide)."""
    merged = GroundTruthSet()
    for part in parts:
        for image_id, boxes in part.items():
            if merged.exists(image_id):
                raise DataValidationError(f"Duplicate image id '{image_id}' while merging GT")
            info = part.image_info(image_id)
            merged.add_image(image_id, info.width, info.height, info.coco_id)
            merged.add_all(image_id, boxes)
    return merged


def ground_truth_as_detections(gts: GroundTruthSet, confidence: float = 1.0) -> DetectionSet:
    """Replay GT boxes as detections with a fixed confidence."""
    dets = DetectionSet()
    for image_id, boxes in gts.items():
        info = gts.image_info(image_id)
        dets.add_image(image_id, info.width, info.height, info.coco_id)
        for box in boxes:
            dets.add_box(image_id, box, confidence)
    return dets


def dataset_stats(gts: GroundTruthSet) -> Dict[str, Any]:
    """
    Box statistics of a GT set.

    Images without boxes are excluded from the per-image mean; means and
    area statistics are None for an empty set.
    """
    per_image = [len(boxes) for _, boxes in gts.items()]
    annotated = [n for n in per_image if n > 0]
    areas = np.array([box.area for box in gts.all_items()], dtype=np.float64)

    histogram: Dict[str, int] = {}
    for n in sorted(set(per_image)):
        histogram[str(n)] = per_image.count(n)

    has_boxes = areas.size > 0
    return {
        "total_boxes": int(areas.size),
        "total_images": len(per_image),
        "annotated_images": len(annotated),
        "mean_box_area": float(areas.mean()) if has_boxes else None,
        "median_box_area": float(np.median(areas)) if has_boxes else None,
        "min_box_area": float(areas.min()) if has_boxes else None,
        "max_box_area": float(areas.max()) if has_boxes else None,
        "mean_boxes_per_annotated_image": (
            sum(annotated) / len(annotated) if annotated else None
        ),
        "boxes_per_image_histogram": histogram,
    }
