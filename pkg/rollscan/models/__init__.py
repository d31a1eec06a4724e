"""Models package for rollscan."""

from rollscan.models.image import ImageBuffer, FrameSequence, get_row, images_equal
from rollscan.models.readout import ReadoutModel, ScanDirection, row_to_frame
from rollscan.models.annotation import (
    BBox,
    Track,
    Detection,
    ImageInfo,
    GroundTruthSet,
    DetectionSet,
)
from rollscan.models.scene import Trajectory, Actor, Scene, GeneratorConfig, ShapeKind
from rollscan.models.report import MetricConfig, EvalReport, ReportComparison
from rollscan.models.run_config import RunConfig

__all__ = [
    "ImageBuffer",
    "FrameSequence",
    "get_row",
    "images_equal",
    "ReadoutModel",
    "ScanDirection",
    "row_to_frame",
    "BBox",
    "Track",
    "Detection",
    "ImageInfo",
    "GroundTruthSet",
    "DetectionSet",
    "Trajectory",
    "Actor",
    "Scene",
    "GeneratorConfig",
    "ShapeKind",
    "MetricConfig",
    "EvalReport",
    "ReportComparison",
    "RunConfig",
]
