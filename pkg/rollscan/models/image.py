"""Raster frame and frame-sequence models."""

from typing import Optional, Dict, Any, Tuple, Sequence

import numpy as np

from rollscan.common.base import BaseModel
from rollscan.common.exceptions import RowRangeError, ValidationError
from rollscan.constants import RGB


class ImageBuffer(BaseModel):
    """
    Immutable 8-bit RGB raster stored row-major.

    ``pixels`` is a read-only ``uint8`` array of shape (height, width, 3);
    every transform returns a new buffer.
    """

    def __init__(self, pixels: np.ndarray) -> None:
        """Initialize ImageBuffer from an (H, W, 3) array (copied)."""
        array = np.array(pixels, dtype=np.uint8, copy=True)
        array.setflags(write=False)
        self._pixels = array
        self.validate_or_raise()

    @classmethod
    def filled(cls, width: int, height: int, color: RGB) -> "ImageBuffer":
        """Create a uniform image."""
        if width < 1 or height < 1:
            raise ValidationError(f"Image dimensions must be positive, got {width}x{height}")
        array = np.empty((height, width, 3), dtype=np.uint8)
        array[:, :] = color
        return cls(array)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RGB]]) -> "ImageBuffer":
        """Create an image from nested rows of RGB triples."""
        return cls(np.asarray(rows, dtype=np.uint8))

    @property
    def pixels(self) -> np.ndarray:
        """Read-only pixel array, shape (height, width, 3)."""
        return self._pixels

    @property
    def width(self) -> int:
        """Pixel columns."""
        return int(self._pixels.shape[1])

    @property
    def height(self) -> int:
        """Pixel rows."""
        return int(self._pixels.shape[0])

    @property
    def size(self) -> Tuple[int, int]:
        """(width, height)."""
        return self.width, self.height

    def get_row(self, r: int) -> np.ndarray:
        """Return row ``r`` as a read-only (width, 3) view."""
        return get_row(self, r)

    def flipped_vertical(self) -> "ImageBuffer":
        """Return the image with its row order reversed."""
        return ImageBuffer(self._pixels[::-1])

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate shape and dimensions."""
        if self._pixels.ndim != 3 or self._pixels.shape[2] != 3:
            return False, f"Pixels must have shape (H, W, 3), got {self._pixels.shape}"

        if self._pixels.shape[0] < 1 or self._pixels.shape[1] < 1:
            return False, "Width and height must be at least 1"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary (nested rows of RGB triples)."""
        return {
            "width": self.width,
            "height": self.height,
            "pixels": self._pixels.tolist(),
        }

    def __eq__(self, other: object) -> bool:
        """Bit-exact equality."""
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return images_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        """String representation."""
        return f"ImageBuffer({self.width}x{self.height})"


class FrameSequence(BaseModel):
    """Ordered burst of uniform GS frames captured at ``frame_rate`` fps."""

    def __init__(self, frames: Sequence[ImageBuffer], frame_rate: float) -> None:
        """Initialize FrameSequence."""
        self._frames: Tuple[ImageBuffer, ...] = tuple(frames)
        self.frame_rate = float(frame_rate)
        self.validate_or_raise()

    @property
    def frames(self) -> Tuple[ImageBuffer, ...]:
        """Frames in capture order."""
        return self._frames

    @property
    def width(self) -> int:
        """Frame width."""
        return self._frames[0].width

    @property
    def height(self) -> int:
        """Frame height."""
        return self._frames[0].height

    def timestamp(self, k: int) -> float:
        """Capture time of frame ``k`` in seconds."""
        return k / self.frame_rate

    def flipped_vertical(self) -> "FrameSequence":
        """Return the sequence with every frame flipped vertically."""
        return FrameSequence([f.flipped_vertical() for f in self._frames], self.frame_rate)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate sequence."""
        if not self._frames:
            return False, "Sequence must contain at least one frame"

        if not self.frame_rate > 0:
            return False, "Frame rate must be positive"

        size = self._frames[0].size
        for index, frame in enumerate(self._frames):
            if frame.size != size:
                return False, f"Frame {index} is {frame.size}, expected {size}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the sidecar metadata dictionary."""
        return {
            "frame_rate": self.frame_rate,
            "width": self.width,
            "height": self.height,
            "frame_count": len(self._frames),
        }

    def __len__(self) -> int:
        """Number of frames."""
        return len(self._frames)

    def __getitem__(self, k: int) -> ImageBuffer:
        """Frame ``k``."""
        return self._frames[k]

    def __repr__(self) -> str:
        """String representation."""
        return f"FrameSequence(frames={len(self._frames)}, frame_rate={self.frame_rate})"


def get_row(img: ImageBuffer, r: int) -> np.ndarray:
    """
    Return the r-th raster row of an image.

    Args:
        img: Source image
        r: Row index

    Returns:
        Read-only (width, 3) array equal to the stored row

    Raises:
        RowRangeError: If r is outside [0, height)
    """
    if not 0 <= r < img.height:
        raise RowRangeError(r, img.height)
    return img.pixels[r]


def images_equal(a: ImageBuffer, b: ImageBuffer) -> bool:
    """True iff both images have the same dimensions and identical pixels."""
    return a.size == b.size and bool(np.array_equal(a.pixels, b.pixels))
