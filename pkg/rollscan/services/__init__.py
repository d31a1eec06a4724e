"""Services package for rollscan."""

from rollscan.services.image_service import load_image, save_image, load_sequence, save_sequence
from rollscan.services.shutter_service import compose_rs, compose_gs, capture_pair
from rollscan.services.scene_service import render_frame, render_burst, gt_tracks, random_scene
from rollscan.services.annotation_service import (
    transform_track_to_rs,
    transform_gt_gs,
    transform_gt_rs,
    dataset_stats,
)
from rollscan.services.metrics_service import iou, match_detections, average_precision, evaluate, compare_reports

__all__ = [
    "load_image",
    "save_image",
    "load_sequence",
    "save_sequence",
    "compose_rs",
    "compose_gs",
    "capture_pair",
    "render_frame",
    "render_burst",
    "gt_tracks",
    "random_scene",
    "transform_track_to_rs",
    "transform_gt_gs",
    "transform_gt_rs",
    "dataset_stats",
    "iou",
    "match_detections",
    "average_precision",
    "evaluate",
    "compare_reports",
]
