"""
Toolkit-wide constants.
Module-level constants in UPPER_CASE as per Python conventions.
"""

from typing import TypeAlias, Tuple

# ============================================================================
# REFERENCE CAPTURE SETTINGS
# ============================================================================

REFERENCE_SENSOR_ROWS: int = 1080
REFERENCE_SENSOR_COLUMNS: int = 1920
REFERENCE_FRAMES_PER_CAPTURE: int = 1080
REFERENCE_GS_FRAME_RATE: float = 30.0
REFERENCE_SOURCE_FRAME_RATE: float = REFERENCE_GS_FRAME_RATE * REFERENCE_FRAMES_PER_CAPTURE

# Crowd dynamics
REFERENCE_MAX_WALKING_SPEED_MPS: float = 2.0
REFERENCE_FAST_SPEED_MULTIPLIER: float = 10.0

# ============================================================================
# SCAN DIRECTIONS
# ============================================================================

SCAN_TOP_TO_BOTTOM: str = "top-to-bottom"
SCAN_BOTTOM_TO_TOP: str = "bottom-to-top"

SCAN_DIRECTIONS: list[str] = [
    SCAN_TOP_TO_BOTTOM,
    SCAN_BOTTOM_TO_TOP,
]

# ============================================================================
# SCENE DEFAULTS
# ============================================================================

DEFAULT_PX_PER_METER: float = 50.0
DEFAULT_BACKGROUND: Tuple[int, int, int] = (96, 96, 96)
DEFAULT_CLASS_ID: int = 0
DEFAULT_CLASS_NAME: str = "pedestrian"

SHAPE_RECTANGLE: str = "rectangle"
SHAPE_ELLIPSE: str = "ellipse"

SHAPES: list[str] = [
    SHAPE_RECTANGLE,
    SHAPE_ELLIPSE,
]

# Pixel extents are rounded to this many decimals before snapping to the grid
SNAP_DECIMALS: int = 9

# ============================================================================
# ANNOTATION SETTINGS
# ============================================================================

FRAGMENT_POLICY_SPLIT: str = "split"
FRAGMENT_POLICY_MERGE: str = "merge"

FRAGMENT_POLICIES: list[str] = [
    FRAGMENT_POLICY_SPLIT,
    FRAGMENT_POLICY_MERGE,
]

YOLO_DECIMALS: int = 6
COCO_DECIMALS: int = 6

FORMAT_YOLO: str = "yolo"
FORMAT_COCO: str = "coco"
FORMAT_BOTH: str = "both"

LABEL_FORMATS: list[str] = [
    FORMAT_YOLO,
    FORMAT_COCO,
    FORMAT_BOTH,
]

# Train/val/test fractions (800/100/100 frames per dataset)
DEFAULT_SPLIT_FRACTIONS: dict[str, float] = {
    "train": 0.8,
    "val": 0.1,
    "test": 0.1,
}

# ============================================================================
# METRIC SETTINGS
# ============================================================================

IOU_THRESHOLD_COARSE: float = 0.5
COCO_IOU_THRESHOLDS: list[float] = [round(0.5 + 0.05 * i, 2) for i in range(10)]
DEFAULT_CONFIDENCE_THRESHOLD: float = 0.25

INTERPOLATION_101: str = "101-point"
INTERPOLATION_11: str = "11-point"
INTERPOLATION_ALL: str = "all-points"

INTERPOLATIONS: list[str] = [
    INTERPOLATION_101,
    INTERPOLATION_11,
    INTERPOLATION_ALL,
]

ABSENT_MARKER: str = "-"

# ============================================================================
# FILE LAYOUT
# ============================================================================

FRAME_FILE_TEMPLATE: str = "frame_{index:06d}.png"
CAPTURE_TEMPLATE: str = "capture_{index:06d}"
SEQUENCE_SIDECAR: str = "sequence.json"
TRACKS_FILE: str = "tracks.json"
YOLO_SIDECAR: str = "images.json"
COCO_FILE: str = "coco.json"
SPLITS_FILE: str = "splits.json"
RUN_CONFIG_ECHO: str = "run_config.json"
REPORT_JSON: str = "report.json"
REPORT_TEXT: str = "report.txt"
COMPARISON_JSON: str = "comparison.json"
COMPARISON_TEXT: str = "comparison.txt"
SWEEP_SUMMARY_JSON: str = "sweep_summary.json"
SWEEP_SUMMARY_TEXT: str = "sweep_summary.txt"

PNG_EXTENSIONS: list[str] = [".png"]
PPM_EXTENSIONS: list[str] = [".ppm"]
LOSSY_EXTENSIONS: list[str] = [".jpg", ".jpeg", ".webp", ".jfif"]

# ============================================================================
# CLI
# ============================================================================

CONFIG_SCHEMA_VERSION: int = 1

EXIT_OK: int = 0
EXIT_ERROR: int = 1
EXIT_CONFIG_ERROR: int = 2
EXIT_DATA_ERROR: int = 3
EXIT_IO_ERROR: int = 4

ENV_LOG_LEVEL: str = "ROLLSCAN_LOG"
ENV_WORKERS: str = "ROLLSCAN_WORKERS"
DEFAULT_LOG_LEVEL: str = "WARNING"
LOG_LEVELS: list[str] = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

DEFAULT_WORKERS: int = 1
DEFAULT_SPEED_MULTIPLIERS: list[float] = [1.0, REFERENCE_FAST_SPEED_MULTIPLIER]

# ============================================================================
# TYPE ALIASES
# ============================================================================

RGB: TypeAlias = Tuple[int, int, int]
ImageSize: TypeAlias = Tuple[int, int]
ImageID: TypeAlias = str

# ============================================================================
# APPLICATION CONFIG
# ============================================================================

APP_NAME: str = "rollscan"
APP_VERSION: str = "1.0.0"
APP_DESCRIPTION: str = "Rolling-shutter dataset synthesis and detection evaluation toolkit"
