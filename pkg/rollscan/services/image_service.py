"""Image and frame-sequence file I/O (PNG canonical, binary PPM fallback)."""

import json
import logging
import os
import re
from pathlib import Path
from typing import Iterable, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from rollscan.common.exceptions import (
    CorruptImageError,
    DataValidationError,
    ImageIOError,
    UnsupportedFormatError,
)
from rollscan.constants import (
    FRAME_FILE_TEMPLATE,
    LOSSY_EXTENSIONS,
    PNG_EXTENSIONS,
    PPM_EXTENSIONS,
    SEQUENCE_SIDECAR,
)
from rollscan.models.image import FrameSequence, ImageBuffer

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

_FRAME_PATTERN = re.compile(r"^frame_(\d{6})\.png$")
_PIL_FORMATS = {".png": "PNG", ".ppm": "PPM"}
_CONVERTIBLE_MODES = {"L", "P"}


def _format_for(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in LOSSY_EXTENSIONS:
        raise UnsupportedFormatError(f"Lossy format '{suffix}' is not accepted", str(path))
    if suffix not in PNG_EXTENSIONS + PPM_EXTENSIONS:
        raise UnsupportedFormatError(f"Unsupported image extension '{suffix}'", str(path))
    return _PIL_FORMATS[suffix]


def load_image(path: PathLike) -> ImageBuffer:
    """
    Load an 8-bit RGB image.

    Args:
        path: PNG or binary PPM file

    Returns:
        Image buffer

    Raises:
        UnsupportedFormatError: For other extensions, lossy formats or unsupported pixel modes
        ImageIOError: If the file is missing or unreadable
        CorruptImageError: If the file cannot be decoded
    """
    path = Path(path)
    expected = _format_for(path)
    if not path.is_file():
        raise ImageIOError(f"Image file not found: {path}", str(path))

    try:
        with Image.open(path) as img:
            if img.format != expected:
                raise CorruptImageError(
                    f"File content is {img.format}, expected {expected}", str(path)
                )
            mode = img.mode
            if mode in _CONVERTIBLE_MODES:
                img = img.convert("RGB")
            elif mode != "RGB":
                raise UnsupportedFormatError(f"Unsupported pixel mode '{mode}'", str(path))
            pixels = np.asarray(img, dtype=np.uint8)
    except UnidentifiedImageError as e:
        raise CorruptImageError(f"Cannot decode image: {e}", str(path)) from e
    except (SyntaxError, ValueError, EOFError) as e:
        raise CorruptImageError(f"Corrupt image data: {e}", str(path)) from e
    except OSError as e:
        raise ImageIOError(f"Cannot read image: {e}", str(path)) from e

    logger.debug(f"Loaded {path} ({pixels.shape[1]}x{pixels.shape[0]})")
    return ImageBuffer(pixels)


def save_image(img: ImageBuffer, path: PathLike) -> None:
    """
    Save an image losslessly.

    Raises:
        UnsupportedFormatError: For extensions other than .png / .ppm
        ImageIOError: If the file cannot be written
    """
    path = Path(path)
    fmt = _format_for(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.ascontiguousarray(img.pixels)).save(path, format=fmt)
    except OSError as e:
        raise ImageIOError(f"Cannot write image: {e}", str(path)) from e
    logger.debug(f"Saved {path}")


def save_sequence(seq: FrameSequence, directory: PathLike) -> Path:
    """
    Write a burst as numbered PNG frames plus a JSON sidecar.

    Returns:
        The sequence directory
    """
    return save_frames(seq.frames, directory, seq.frame_rate)


def save_frames(frames: Iterable[ImageBuffer], directory: PathLike, frame_rate: float) -> Path:
    """
    Write frames one at a time, then the sidecar.

    Same layout as ``save_sequence`` without holding the burst in memory.

    Raises:
        DataValidationError: If no frames are given or their sizes differ
    """
    directory = Path(directory)
    size = None
    count = 0
    for index, frame in enumerate(frames):
        if size is None:
            size = frame.size
        elif frame.size != size:
            raise DataValidationError(
                f"Sequence '{directory.name}': frame {index} is {frame.size}, expected {size}",
                {"burst": str(directory)},
            )
        save_image(frame, frame_path(directory, index))
        count += 1
    if size is None:
        raise DataValidationError(f"Sequence '{directory.name}' has no frames", {"burst": str(directory)})

    write_json(
        directory / SEQUENCE_SIDECAR,
        {"frame_rate": float(frame_rate), "width": size[0], "height": size[1], "frame_count": count},
    )
    logger.info(f"Saved sequence of {count} frames to {directory}")
    return directory


def frame_path(directory: PathLike, index: int) -> Path:
    """Path of burst frame ``index`` inside a sequence directory."""
    return Path(directory) / FRAME_FILE_TEMPLATE.format(index=index)


def read_sequence_metadata(directory: PathLike) -> dict:
    """
    Read and check a sequence sidecar.

    Raises:
        ImageIOError: If the sidecar is missing or unreadable
        DataValidationError: If the sidecar is malformed or frames are missing
    """
    directory = Path(directory)
    meta = read_json(directory / SEQUENCE_SIDECAR)
    required = ("frame_rate", "width", "height", "frame_count")
    if not isinstance(meta, dict) or any(key not in meta for key in required):
        raise DataValidationError(
            f"Sequence '{directory.name}': sidecar must hold {', '.join(required)}",
            {"burst": str(directory)},
        )

    found = sorted(
        int(m.group(1)) for m in (_FRAME_PATTERN.match(p.name) for p in directory.iterdir()) if m
    )
    expected = list(range(meta["frame_count"]))
    if found[: len(expected)] != expected:
        missing = sorted(set(expected) - set(found))
        raise DataValidationError(
            f"Sequence '{directory.name}' is missing {len(missing)} frame(s), first {missing[:5]}",
            {"burst": str(directory), "missing": missing[:20]},
        )
    return meta


def load_sequence(directory: PathLike) -> FrameSequence:
    """
    Load a burst written by ``save_sequence``.

    Raises:
        DataValidationError: If frames are missing or disagree with the sidecar
    """
    directory = Path(directory)
    meta = read_sequence_metadata(directory)
    frames = [
        load_image(frame_path(directory, i))
        for i in range(meta["frame_count"])
    ]
    for index, frame in enumerate(frames):
        if frame.size != (meta["width"], meta["height"]):
            raise DataValidationError(
                f"Sequence '{directory.name}': frame {index} is {frame.size}, "
                f"sidecar says {(meta['width'], meta['height'])}",
                {"burst": str(directory)},
            )
    return FrameSequence(frames, meta["frame_rate"])


def write_json(path: PathLike, data: object) -> None:
    """
    Write canonical JSON (2-space indent, trailing newline).

    Raises:
        ImageIOError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ImageIOError(f"Cannot write {path}: {e}", str(path)) from e


def read_json(path: PathLike) -> object:
    """
    Read a JSON file.

    Raises:
        ImageIOError: If the file is missing or unreadable
        DataValidationError: If the file is not valid JSON
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ImageIOError(f"Cannot read {path}: {e}", str(path)) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DataValidationError(f"{path}: invalid JSON ({e})", {"file": str(path)}) from e


def write_text(path: PathLike, text: str) -> None:
    """
    Write a UTF-8 text file.

    Raises:
        ImageIOError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ImageIOError(f"Cannot write {path}: {e}", str(path)) from e
