"""Box, track and detection models plus image-keyed GT/detection sets."""

import math
import numbers
from dataclasses import dataclass, replace
from typing import Optional, Dict, Any, Tuple, List, Sequence

from rollscan.common.base import BaseModel, BaseCollection
from rollscan.common.exceptions import ValidationError
from rollscan.constants import DEFAULT_CLASS_ID, SNAP_DECIMALS


def pixel_span(lo: float, hi: float) -> Tuple[int, int]:
    """
    Half-open range of pixel indices whose centres fall in [lo, hi).

    Extents are rounded to SNAP_DECIMALS first, so interpolation noise never
    moves an edge across a pixel centre.
    """
    start = math.ceil(round(lo - 0.5, SNAP_DECIMALS))
    stop = math.ceil(round(hi - 0.5, SNAP_DECIMALS))
    return start, max(start, stop)


@dataclass(frozen=True)
class BBox(BaseModel):
    """Axis-aligned box in pixel-edge coordinates (real-valued)."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float
    class_id: int = DEFAULT_CLASS_ID

    def __post_init__(self) -> None:
        """Validate on construction."""
        self.validate_or_raise()

    @property
    def width(self) -> float:
        """Box width."""
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        """Box height."""
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        """Box area in px^2."""
        return self.width * self.height

    def is_empty(self) -> bool:
        """True when the box has zero area."""
        return self.width <= 0 or self.height <= 0

    def clamp(self, width: float, height: float) -> "BBox":
        """Intersect with the image rectangle [0, width] x [0, height]."""
        x_min = min(max(self.x_min, 0.0), width)
        x_max = min(max(self.x_max, 0.0), width)
        y_min = min(max(self.y_min, 0.0), height)
        y_max = min(max(self.y_max, 0.0), height)
        return replace(self, x_min=x_min, y_min=y_min, x_max=x_max, y_max=y_max)

    def row_span(self) -> Tuple[int, int]:
        """Raster rows covered by the box (half-open)."""
        return pixel_span(self.y_min, self.y_max)

    def col_span(self) -> Tuple[int, int]:
        """Raster columns covered by the box (half-open)."""
        return pixel_span(self.x_min, self.x_max)

    def occupies_row(self, r: int) -> bool:
        """True when raster row ``r`` is covered (sampled at the row centre)."""
        start, stop = self.row_span()
        return start <= r < stop

    def translated(self, dx: float, dy: float) -> "BBox":
        """Return the box shifted by (dx, dy)."""
        return replace(
            self,
            x_min=self.x_min + dx,
            y_min=self.y_min + dy,
            x_max=self.x_max + dx,
            y_max=self.y_max + dy,
        )

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate box."""
        coords = (self.x_min, self.y_min, self.x_max, self.y_max)
        if not all(isinstance(c, numbers.Real) and math.isfinite(c) for c in coords):
            return False, f"Coordinates must be finite numbers, got {coords}"

        if self.x_min > self.x_max:
            return False, f"x_min {self.x_min} exceeds x_max {self.x_max}"

        if self.y_min > self.y_max:
            return False, f"y_min {self.y_min} exceeds y_max {self.y_max}"

        if isinstance(self.class_id, bool) or not isinstance(self.class_id, numbers.Integral):
            return False, "class_id must be an integer"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "x_min": self.x_min,
            "y_min": self.y_min,
            "x_max": self.x_max,
            "y_max": self.y_max,
            "class_id": self.class_id,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BBox":
        """Create from dictionary."""
        return cls(
            data["x_min"],
            data["y_min"],
            data["x_max"],
            data["y_max"],
            data.get("class_id", DEFAULT_CLASS_ID),
        )


@dataclass(frozen=True)
class Track(BaseModel):
    """One actor's GT box in every frame of a capture burst."""

    actor_id: int
    boxes: Tuple[BBox, ...]

    def __post_init__(self) -> None:
        """Freeze the box list and validate."""
        object.__setattr__(self, "boxes", tuple(self.boxes))
        self.validate_or_raise()

    def is_static(self) -> bool:
        """True when every frame carries the same box."""
        return all(box == self.boxes[0] for box in self.boxes)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate track."""
        if not self.boxes:
            return False, "Track must contain at least one box"

        if not all(isinstance(box, BBox) for box in self.boxes):
            return False, "Track boxes must be BBox instances"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "actor_id": self.actor_id,
            "boxes": [box.to_dict() for box in self.boxes],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Track":
        """Create from dictionary."""
        return cls(data["actor_id"], tuple(BBox.from_dict(b) for b in data["boxes"]))

    def __len__(self) -> int:
        """Number of per-frame boxes."""
        return len(self.boxes)


@dataclass(frozen=True)
class Detection(BaseModel):
    """Scored predicted box."""

    image_id: str
    box: BBox
    confidence: float

    def __post_init__(self) -> None:
        """Validate on construction."""
        self.validate_or_raise()

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate detection."""
        if not isinstance(self.confidence, numbers.Real) or not 0.0 <= self.confidence <= 1.0:
            return False, f"Confidence must lie in [0, 1], got {self.confidence}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "image_id": self.image_id,
            "box": self.box.to_dict(),
            "confidence": self.confidence,
        }


@dataclass(frozen=True)
class ImageInfo:
    """Dimensions (and optional COCO id) of an annotated image."""

    width: int
    height: int
    coco_id: Optional[int] = None

    @property
    def size(self) -> Tuple[int, int]:
        """(width, height)."""
        return self.width, self.height


class _ImageSet(BaseCollection):
    """Shared image registry for GT and detection sets."""

    def __init__(self) -> None:
        """Initialize set."""
        super().__init__()
        self._images: Dict[str, ImageInfo] = {}

    def add_image(self, image_id: str, width: int, height: int, coco_id: Optional[int] = None) -> None:
        """
        Register an image (with no boxes yet).

        Raises:
            ValidationError: If the image is already registered with other dimensions
        """
        info = ImageInfo(width, height, coco_id)
        known = self._images.get(image_id)
        if known is not None and known.size != info.size:
            raise ValidationError(
                f"Image '{image_id}' registered as {known.size}, got {info.size}"
            )
        if known is None or coco_id is not None:
            self._images[image_id] = info
        self._items.setdefault(image_id, [])

    def image_info(self, image_id: str) -> ImageInfo:
        """Dimensions of a registered image."""
        self.get_or_raise(image_id)
        return self._images[image_id]

    def image_sizes(self) -> Dict[str, Tuple[int, int]]:
        """Map of image id -> (width, height)."""
        return {image_id: self._images[image_id].size for image_id in self.image_ids()}

    def coco_ids(self) -> Dict[str, int]:
        """
        Map of image id -> COCO integer id.

        Images read from a COCO file keep their ids; others are numbered from
        1 in sorted order after the largest known id.
        """
        assigned = {i: info.coco_id for i, info in self._images.items() if info.coco_id is not None}
        next_id = max(assigned.values(), default=0) + 1
        result: Dict[str, int] = {}
        for image_id in self.image_ids():
            if image_id in assigned:
                result[image_id] = assigned[image_id]
            else:
                result[image_id] = next_id
                next_id += 1
        return result

    def _require_image(self, image_id: str) -> None:
        if image_id not in self._images:
            raise ValidationError(f"Image '{image_id}' must be registered before adding items")


class GroundTruthSet(_ImageSet):
    """GT boxes keyed by image id."""

    def add(self, image_id: str, item: BBox) -> None:
        """Add a GT box to a registered image."""
        self._require_image(image_id)
        self._items[image_id].append(item)

    def add_all(self, image_id: str, boxes: Sequence[BBox]) -> None:
        """Add several GT boxes to a registered image."""
        for box in boxes:
            self.add(image_id, box)

    def class_ids(self) -> List[int]:
        """Sorted class ids present."""
        return sorted({box.class_id for box in self.all_items()})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            image_id: {
                "width": self._images[image_id].width,
                "height": self._images[image_id].height,
                "boxes": [box.to_dict() for box in boxes],
            }
            for image_id, boxes in self.items()
        }

    def __repr__(self) -> str:
        """String representation."""
        return f"GroundTruthSet(images={len(self)}, boxes={self.count()})"


class DetectionSet(_ImageSet):
    """Detections keyed by image id."""

    def add(self, image_id: str, item: Detection) -> None:
        """Add a detection to a registered image."""
        self._require_image(image_id)
        if item.image_id != image_id:
            raise ValidationError(
                f"Detection for '{item.image_id}' added under image '{image_id}'"
            )
        self._items[image_id].append(item)

    def add_box(self, image_id: str, box: BBox, confidence: float) -> None:
        """Add a detection built from a box and a confidence."""
        self.add(image_id, Detection(image_id, box, confidence))

    def class_ids(self) -> List[int]:
        """Sorted class ids present."""
        return sorted({det.box.class_id for det in self.all_items()})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            image_id: [det.to_dict() for det in dets]
            for image_id, dets in self.items()
        }

    def __repr__(self) -> str:
        """String representation."""
        return f"DetectionSet(images={len(self)}, detections={self.count()})"


def check_consistent(dets: DetectionSet, gts: GroundTruthSet) -> Tuple[bool, Optional[str]]:
    """Check that every detection image is known to the GT set with equal size."""
    for image_id in dets.image_ids():
        if not gts.exists(image_id):
            return False, f"Detections reference unknown image '{image_id}'"
        if dets.image_info(image_id).size != gts.image_info(image_id).size:
            return False, f"Image '{image_id}' has different sizes in detections and GT"
    return True, None
