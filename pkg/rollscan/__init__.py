"""
rollscan
Rolling-shutter dataset synthesis, RS ground-truth transformation and
detection evaluation, built from high-frame-rate global-shutter bursts.
"""

from rollscan.common.base import BaseModel, BaseCollection
from rollscan.common.exceptions import (
    RollscanError,
    ValidationError,
    ConfigError,
    DataValidationError,
    NotFoundError,
    ImageIOError,
    AnnotationFormatError,
)
from rollscan.constants import (
    # Reference capture settings
    REFERENCE_SENSOR_ROWS,
    REFERENCE_FRAMES_PER_CAPTURE,
    REFERENCE_GS_FRAME_RATE,
    REFERENCE_SOURCE_FRAME_RATE,
    # Metric settings
    IOU_THRESHOLD_COARSE,
    COCO_IOU_THRESHOLDS,
    DEFAULT_CONFIDENCE_THRESHOLD,
    # App config
    APP_NAME,
    APP_VERSION,
)
from rollscan.models import (
    ImageBuffer,
    FrameSequence,
    ReadoutModel,
    ScanDirection,
    BBox,
    Track,
    Detection,
    GroundTruthSet,
    DetectionSet,
    Trajectory,
    Actor,
    Scene,
    GeneratorConfig,
    ShapeKind,
    MetricConfig,
    EvalReport,
    ReportComparison,
    RunConfig,
)

__version__ = APP_VERSION

__all__ = [
    # Base classes
    "BaseModel",
    "BaseCollection",
    # Exceptions
    "RollscanError",
    "ValidationError",
    "ConfigError",
    "DataValidationError",
    "NotFoundError",
    "ImageIOError",
    "AnnotationFormatError",
    # Reference capture settings
    "REFERENCE_SENSOR_ROWS",
    "REFERENCE_FRAMES_PER_CAPTURE",
    "REFERENCE_GS_FRAME_RATE",
    "REFERENCE_SOURCE_FRAME_RATE",
    # Metric settings
    "IOU_THRESHOLD_COARSE",
    "COCO_IOU_THRESHOLDS",
    "DEFAULT_CONFIDENCE_THRESHOLD",
    # Models
    "ImageBuffer",
    "FrameSequence",
    "ReadoutModel",
    "ScanDirection",
    "BBox",
    "Track",
    "Detection",
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
    # App config
    "APP_NAME",
    "APP_VERSION",
]
