"""YOLO and COCO readers/writers, detection files and split manifests."""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from rollscan.common.exceptions import (
    AnnotationFormatError,
    CoordinateRangeError,
    ImageIOError,
    UnknownImageError,
    ValidationError,
)
from rollscan.constants import (
    COCO_DECIMALS,
    DEFAULT_CLASS_ID,
    DEFAULT_CLASS_NAME,
    DEFAULT_SPLIT_FRACTIONS,
    YOLO_DECIMALS,
    YOLO_SIDECAR,
)
from rollscan.models.annotation import BBox, DetectionSet, GroundTruthSet
from rollscan.services.image_service import PathLike, read_json, write_json, write_text

logger = logging.getLogger(__name__)


# ============================================================================
# YOLO
# ============================================================================


def _yolo_line(box: BBox, width: int, height: int, confidence: Optional[float] = None) -> str:
    cx = (box.x_min + box.x_max) / 2.0 / width
    cy = (box.y_min + box.y_max) / 2.0 / height
    w = box.width / width
    h = box.height / height
    fields = [str(box.class_id)] + [f"{v:.{YOLO_DECIMALS}f}" for v in (cx, cy, w, h)]
    if confidence is not None:
        fields.append(f"{confidence:.{YOLO_DECIMALS}f}")
    return " ".join(fields)


def _write_yolo_dir(
    directory: Path,
    sizes: Mapping[str, Tuple[int, int]],
    lines_by_image: Mapping[str, List[str]],
) -> None:
    for image_id in sorted(sizes):
        lines = lines_by_image.get(image_id, [])
        write_text(directory / f"{image_id}.txt", "".join(line + "\n" for line in lines))
    write_json(directory / YOLO_SIDECAR, {i: list(sizes[i]) for i in sorted(sizes)})


def write_yolo(gts: GroundTruthSet, directory: PathLike) -> Path:
    """
    Write one ``<image_id>.txt`` per image ("class cx cy w h", normalized)
    plus the ``images.json`` size sidecar.
    """
    directory = Path(directory)
    sizes = gts.image_sizes()
    lines = {
        image_id: [_yolo_line(box, *sizes[image_id]) for box in boxes]
        for image_id, boxes in gts.items()
    }
    _write_yolo_dir(directory, sizes, lines)
    logger.info(f"Wrote YOLO labels for {len(sizes)} images to {directory}")
    return directory


def write_yolo_detections(dets: DetectionSet, directory: PathLike) -> Path:
    """Write YOLO detection files (label line plus trailing confidence)."""
    directory = Path(directory)
    sizes = dets.image_sizes()
    lines = {
        image_id: [_yolo_line(d.box, *sizes[image_id], d.confidence) for d in items]
        for image_id, items in dets.items()
    }
    _write_yolo_dir(directory, sizes, lines)
    logger.info(f"Wrote YOLO detections for {len(sizes)} images to {directory}")
    return directory


def _read_sizes(directory: Path) -> Dict[str, Tuple[int, int]]:
    sidecar = directory / YOLO_SIDECAR
    data = read_json(sidecar)
    if not isinstance(data, dict):
        raise AnnotationFormatError("size sidecar must be an object", str(sidecar))
    sizes = {}
    for image_id, size in data.items():
        if (
            not isinstance(size, list)
            or len(size) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in size)
        ):
            raise AnnotationFormatError(f"bad size for image '{image_id}'", str(sidecar))
        sizes[image_id] = (size[0], size[1])
    return sizes


def _parse_yolo_file(
    path: Path,
    width: int,
    height: int,
    with_confidence: bool,
) -> List[Tuple[BBox, Optional[float]]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ImageIOError(f"Cannot read {path}: {e}", str(path)) from e

    expected = 6 if with_confidence else 5
    records = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != expected:
            raise AnnotationFormatError(
                f"expected {expected} fields, got {len(fields)}", str(path), line_no
            )
        try:
            class_id = int(fields[0])
            values = [float(v) for v in fields[1:]]
        except ValueError as e:
            raise AnnotationFormatError(f"non-numeric field ({e})", str(path), line_no) from e
        if not all(math.isfinite(v) for v in values):
            raise AnnotationFormatError("non-finite field", str(path), line_no)

        cx, cy, w, h = values[:4]
        if w < 0 or h < 0:
            raise AnnotationFormatError("negative box size", str(path), line_no)
        if not all(0.0 <= v <= 1.0 for v in (cx, cy, w, h)):
            raise CoordinateRangeError(
                "normalized coordinate outside [0, 1]", str(path), line_no
            )
        confidence = values[4] if with_confidence else None
        if confidence is not None and not 0.0 <= confidence <= 1.0:
            raise AnnotationFormatError("confidence outside [0, 1]", str(path), line_no)

        box = BBox(
            (cx - w / 2.0) * width,
            (cy - h / 2.0) * height,
            (cx + w / 2.0) * width,
            (cy + h / 2.0) * height,
            class_id,
        )
        records.append((box, confidence))
    return records


def _yolo_records(
    directory: Path,
    image_sizes: Optional[Mapping[str, Tuple[int, int]]],
    with_confidence: bool,
) -> Tuple[Dict[str, Tuple[int, int]], Dict[str, List[Tuple[BBox, Optional[float]]]]]:
    if not directory.is_dir():
        raise ImageIOError(f"Label directory not found: {directory}", str(directory))
    sizes = dict(image_sizes) if image_sizes is not None else _read_sizes(directory)
    records = {}
    for path in sorted(directory.glob("*.txt")):
        if path.stem not in sizes:
            raise UnknownImageError(f"no image '{path.stem}' in the reference set", str(path))
        records[path.stem] = _parse_yolo_file(path, *sizes[path.stem], with_confidence)
    return sizes, records


def read_yolo(
    directory: PathLike,
    image_sizes: Optional[Mapping[str, Tuple[int, int]]] = None,
) -> GroundTruthSet:
    """
    Read a YOLO label directory.

    Args:
        directory: Directory of ``<image_id>.txt`` files
        image_sizes: image id -> (width, height); read from ``images.json`` if omitted

    Raises:
        AnnotationFormatError: Malformed line or field (reported with file and line)
        CoordinateRangeError: Normalized coordinate outside [0, 1]
        UnknownImageError: Label file for an image outside the size map
    """
    sizes, records = _yolo_records(Path(directory), image_sizes, with_confidence=False)
    gts = GroundTruthSet()
    for image_id in sorted(sizes):
        gts.add_image(image_id, *sizes[image_id])
        gts.add_all(image_id, [box for box, _ in records.get(image_id, [])])
    return gts


def read_yolo_detections(
    directory: PathLike,
    image_sizes: Optional[Mapping[str, Tuple[int, int]]] = None,
) -> DetectionSet:
    """Read a YOLO detection directory (lines carry a trailing confidence)."""
    sizes, records = _yolo_records(Path(directory), image_sizes, with_confidence=True)
    dets = DetectionSet()
    for image_id in sorted(sizes):
        dets.add_image(image_id, *sizes[image_id])
        for box, confidence in records.get(image_id, []):
            dets.add_box(image_id, box, confidence)
    return dets


# ============================================================================
# COCO
# ============================================================================


def _round(value: float) -> float:
    return round(float(value), COCO_DECIMALS)


def _coco_bbox(box: BBox) -> List[float]:
    return [_round(box.x_min), _round(box.y_min), _round(box.width), _round(box.height)]


def coco_categories(class_ids: Sequence[int], names: Optional[Mapping[int, str]] = None) -> List[Dict[str, Any]]:
    """Category records; the default class is named "pedestrian"."""
    names = dict(names or {})
    names.setdefault(DEFAULT_CLASS_ID, DEFAULT_CLASS_NAME)
    ids = sorted(set(class_ids) | {DEFAULT_CLASS_ID})
    return [{"id": c, "name": names.get(c, f"class_{c}")} for c in ids]


def coco_document(gts: GroundTruthSet, names: Optional[Mapping[int, str]] = None) -> Dict[str, Any]:
    """COCO-style dictionary (category_id == class id)."""
    coco_ids = gts.coco_ids()
    images = []
    annotations = []
    for image_id, boxes in gts.items():
        info = gts.image_info(image_id)
        images.append(
            {
                "id": coco_ids[image_id],
                "file_name": f"{image_id}.png",
                "width": info.width,
                "height": info.height,
            }
        )
        for box in boxes:
            bbox = _coco_bbox(box)
            annotations.append(
                {
                    "id": len(annotations) + 1,
                    "image_id": coco_ids[image_id],
                    "category_id": box.class_id,
                    "bbox": bbox,
                    "area": _round(bbox[2] * bbox[3]),
                    "iscrowd": 0,
                }
            )
    return {
        "images": images,
        "annotations": annotations,
        "categories": coco_categories(gts.class_ids(), names),
    }


def write_coco(gts: GroundTruthSet, path: PathLike, names: Optional[Mapping[int, str]] = None) -> Path:
    """Write a COCO-style annotation file."""
    path = Path(path)
    write_json(path, coco_document(gts, names))
    logger.info(f"Wrote COCO annotations ({gts.count()} boxes) to {path}")
    return path


def _require(record: Any, key: str, path: str, index: int) -> Any:
    if not isinstance(record, dict) or key not in record:
        raise AnnotationFormatError(f"record missing '{key}'", path, index)
    return record[key]


def _require_int(value: Any, name: str, path: str, index: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise AnnotationFormatError(f"'{name}' must be an integer", path, index)
    return value


def _parse_coco_bbox(value: Any, path: str, index: int, class_id: int) -> BBox:
    if (
        not isinstance(value, list)
        or len(value) != 4
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        or not all(math.isfinite(v) for v in value)
    ):
        raise AnnotationFormatError("'bbox' must be four finite numbers", path, index)
    x, y, w, h = (float(v) for v in value)
    if w < 0 or h < 0:
        raise AnnotationFormatError("'bbox' has negative width or height", path, index)
    return BBox(x, y, x + w, y + h, class_id)


def read_coco(path: PathLike) -> GroundTruthSet:
    """
    Read a COCO-style annotation file. Image ids are the file-name stems;
    COCO integer ids are kept so results files can be matched.

    Raises:
        AnnotationFormatError: Malformed record or field (reported with record index)
        UnknownImageError: Annotation referencing an image not listed
    """
    path_str = str(path)
    data = read_json(path)
    if not isinstance(data, dict):
        raise AnnotationFormatError("top level must be an object", path_str)
    images = data.get("images")
    annotations = data.get("annotations")
    if not isinstance(images, list) or not isinstance(annotations, list):
        raise AnnotationFormatError("'images' and 'annotations' must be lists", path_str)

    gts = GroundTruthSet()
    by_coco_id: Dict[int, str] = {}
    for index, record in enumerate(images):
        coco_id = _require_int(_require(record, "id", path_str, index), "id", path_str, index)
        file_name = _require(record, "file_name", path_str, index)
        width = _require_int(_require(record, "width", path_str, index), "width", path_str, index)
        height = _require_int(_require(record, "height", path_str, index), "height", path_str, index)
        if not isinstance(file_name, str) or width < 1 or height < 1:
            raise AnnotationFormatError("bad image record", path_str, index)
        image_id = Path(file_name).stem
        if coco_id in by_coco_id or gts.exists(image_id):
            raise AnnotationFormatError(f"duplicate image '{image_id}'", path_str, index)
        by_coco_id[coco_id] = image_id
        gts.add_image(image_id, width, height, coco_id)

    for index, record in enumerate(annotations):
        coco_id = _require_int(_require(record, "image_id", path_str, index), "image_id", path_str, index)
        if coco_id not in by_coco_id:
            raise UnknownImageError(f"annotation references unknown image {coco_id}", path_str, index)
        class_id = _require_int(
            _require(record, "category_id", path_str, index), "category_id", path_str, index
        )
        box = _parse_coco_bbox(_require(record, "bbox", path_str, index), path_str, index, class_id)
        gts.add(by_coco_id[coco_id], box)
    return gts


def write_coco_detections(dets: DetectionSet, path: PathLike, reference: GroundTruthSet) -> Path:
    """Write a COCO results list ``[{image_id, category_id, bbox, score}]``."""
    path = Path(path)
    coco_ids = reference.coco_ids()
    results = []
    for image_id, items in dets.items():
        if image_id not in coco_ids:
            raise UnknownImageError(f"no image '{image_id}' in the reference set", str(path))
        for det in items:
            results.append(
                {
                    "image_id": coco_ids[image_id],
                    "category_id": det.box.class_id,
                    "bbox": _coco_bbox(det.box),
                    "score": _round(det.confidence),
                }
            )
    write_json(path, results)
    logger.info(f"Wrote {len(results)} COCO detections to {path}")
    return path


def read_coco_detections(path: PathLike, reference: GroundTruthSet) -> DetectionSet:
    """
    Read a COCO results list against a reference GT set.

    Raises:
        AnnotationFormatError: Malformed record or score outside [0, 1]
        UnknownImageError: Result for an image outside the reference set
    """
    path_str = str(path)
    data = read_json(path)
    if not isinstance(data, list):
        raise AnnotationFormatError("results file must be a JSON list", path_str)

    by_coco_id = {coco_id: image_id for image_id, coco_id in reference.coco_ids().items()}
    dets = _empty_detections(reference)
    for index, record in enumerate(data):
        coco_id = _require_int(_require(record, "image_id", path_str, index), "image_id", path_str, index)
        if coco_id not in by_coco_id:
            raise UnknownImageError(f"result references unknown image {coco_id}", path_str, index)
        class_id = _require_int(
            _require(record, "category_id", path_str, index), "category_id", path_str, index
        )
        box = _parse_coco_bbox(_require(record, "bbox", path_str, index), path_str, index, class_id)
        score = _require(record, "score", path_str, index)
        if isinstance(score, bool) or not isinstance(score, (int, float)) or not 0.0 <= score <= 1.0:
            raise AnnotationFormatError("'score' must lie in [0, 1]", path_str, index)
        dets.add_box(by_coco_id[coco_id], box, float(score))
    return dets


def _empty_detections(reference: GroundTruthSet) -> DetectionSet:
    dets = DetectionSet()
    for image_id in reference.image_ids():
        info = reference.image_info(image_id)
        dets.add_image(image_id, info.width, info.height, info.coco_id)
    return dets


def read_detections(path: PathLike, reference: GroundTruthSet) -> DetectionSet:
    """
    Read detections in either supported form.

    A ``.json`` file is a COCO results list; a directory holds YOLO detection
    files. Image sizes and ids come from the reference GT set.
    """
    path = Path(path)
    if path.is_dir():
        found = read_yolo_detections(path, reference.image_sizes())
        dets = _empty_detections(reference)
        for image_id, items in found.items():
            for det in items:
                dets.add(image_id, det)
        return dets
    if path.suffix.lower() == ".json":
        return read_coco_detections(path, reference)
    if not path.exists():
        raise ImageIOError(f"Detections not found: {path}", str(path))
    raise AnnotationFormatError("detections must be a .json file or a YOLO directory", str(path))


# ============================================================================
# SPLITS
# ============================================================================


def split_image_ids(
    image_ids: Sequence[str],
    fractions: Optional[Mapping[str, float]] = None,
    seed: int = 0,
) -> Dict[str, List[str]]:
    """
    Deterministic shuffled split of image ids by fraction.

    Raises:
        ValidationError: If fractions are negative or do not sum to 1
    """
    fractions = dict(fractions or DEFAULT_SPLIT_FRACTIONS)
    if any(f < 0 for f in fractions.values()) or not math.isclose(sum(fractions.values()), 1.0):
        raise ValidationError(f"Split fractions must be non-negative and sum to 1, got {fractions}")

    ordered = sorted(image_ids)
    order = np.random.default_rng(seed).permutation(len(ordered))
    shuffled = [ordered[i] for i in order]

    splits: Dict[str, List[str]] = {}
    cumulative = 0.0
    start = 0
    names = list(fractions)
    for position, name in enumerate(names):
        cumulative += fractions[name]
        stop = len(shuffled) if position == len(names) - 1 else int(round(cumulative * len(shuffled)))
        splits[name] = sorted(shuffled[start:stop])
        start = stop
    return splits


def write_split_manifest(
    image_ids: Sequence[str],
    path: PathLike,
    fractions: Optional[Mapping[str, float]] = None,
    seed: int = 0,
) -> Path:
    """Record a train/val/test manifest for external training runs."""
    path = Path(path)
    fractions = dict(fractions or DEFAULT_SPLIT_FRACTIONS)
    write_json(
        path,
        {
            "seed": seed,
            "fractions": fractions,
            "splits": split_image_ids(image_ids, fractions, seed),
        },
    )
    return path
