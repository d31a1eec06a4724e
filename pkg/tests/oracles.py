"""Brute-force reference implementations used by the acceptance-style tests."""

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from rollscan.models.readout import ReadoutModel
from rollscan.models.scene import Scene
from rollscan.services.scene_service import render_frame

Box = Tuple[float, float, float, float]


# ============================================================================
# RS BOX ORACLE
# ============================================================================


def actor_masks(scene: Scene, model: ReadoutModel, start_time: float = 0.0) -> List[np.ndarray]:
    """Per-frame boolean masks of non-background pixels."""
    background = np.array(scene.background, dtype=np.uint8)
    masks = []
    for k in range(model.frames_per_capture):
        frame = render_frame(scene, start_time + k / model.source_frame_rate)
        masks.append(np.any(frame.pixels != background, axis=2))
    return masks


def compose_mask(masks: Sequence[np.ndarray], model: ReadoutModel) -> np.ndarray:
    """Row-by-row composition of the masks, one explicit loop per row."""
    height = masks[0].shape[0]
    out = np.zeros_like(masks[0])
    for r in range(height):
        if model.scan_direction.value == "top-to-bottom":
            k = (r * model.frames_per_capture) // height
        else:
            k = ((height - 1 - r) * model.frames_per_capture) // height
        out[r] = masks[k][r]
    return out


def component_boxes(mask: np.ndarray) -> List[Box]:
    """Tight boxes of the 8-connected components, ordered by top row then left column."""
    height, width = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    boxes = []
    for r in range(height):
        for c in range(width):
            if not mask[r, c] or seen[r, c]:
                continue
            queue = deque([(r, c)])
            seen[r, c] = True
            rows, cols = [], []
            while queue:
                y, x = queue.popleft()
                rows.append(y)
                cols.append(x)
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < height and 0 <= nx < width and mask[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            queue.append((ny, nx))
            boxes.append((float(min(cols)), float(min(rows)), float(max(cols) + 1), float(max(rows) + 1)))
    boxes.sort(key=lambda b: (b[1], b[0]))
    return boxes


def rs_oracle_boxes(scene: Scene, model: ReadoutModel) -> List[Box]:
    """RS boxes of a single-actor scene from the composed rendered mask."""
    return component_boxes(compose_mask(actor_masks(scene, model), model))


# ============================================================================
# METRICS ORACLE
# ============================================================================

# image_id -> (gt boxes [(x0, y0, x1, y1, cls)], dets [(x0, y0, x1, y1, cls, conf)])
Instance = Dict[str, Tuple[List[tuple], List[tuple]]]


def naive_iou(a: tuple, b: tuple) -> float:
    """IoU via explicit intersection rectangle."""
    left, top = max(a[0], b[0]), max(a[1], b[1])
    right, bottom = min(a[2], b[2]), min(a[3], b[3])
    inter = 0.0
    if right > left and bottom > top:
        inter = (right - left) * (bottom - top)
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    union = area_a + area_b - inter
    return 0.0 if union <= 0 else inter / union


def _area(box: tuple) -> float:
    return (box[2] - box[0]) * (box[3] - box[1])


def naive_match(instance: Instance, thr: float) -> Dict[str, List[bool]]:
    """Per-detection TP flags, image by image, class by class."""
    flags = {}
    for image_id in sorted(instance):
        gts, dets = instance[image_id]
        result = [False] * len(dets)
        used = [False] * len(gts)
        order = sorted(range(len(dets)), key=lambda i: (-dets[i][5], -_area(dets[i]), i))
        for i in order:
            best, best_iou = None, None
            for j, gt in enumerate(gts):
                if used[j] or gt[4] != dets[i][4]:
                    continue
                value = naive_iou(dets[i], gt)
                if value < thr:
                    continue
                if best is None or value > best_iou:
                    best, best_iou = j, value
            if best is not None:
                used[best] = True
                result[i] = True
        flags[image_id] = result
    return flags


def naive_ap(flags: List[bool], n_gt: int, points: int = 101) -> Optional[float]:
    """Interpolated AP by exhaustive enumeration of the PR polyline."""
    if n_gt == 0:
        return None if not flags else 0.0
    if not flags:
        return 0.0
    precisions, recalls = [], []
    tp = fp = 0
    for hit in flags:
        if hit:
            tp += 1
        else:
            fp += 1
        precisions.append(tp / (tp + fp))
        recalls.append(tp / n_gt)
    total = 0.0
    for i in range(points):
        level = i / (points - 1)
        value = 0.0
        for k in range(len(recalls)):
            if recalls[k] >= level:
                value = max(precisions[k:])
                break
        total += value
    return total / points


def naive_evaluate(
    instance: Instance,
    thresholds: Sequence[float],
    confidence_threshold: float,
) -> Dict[str, Optional[float]]:
    """P, R, mAP@0.5 and mAP over ``thresholds`` from first principles."""
    classes = sorted(
        {g[4] for gts, _ in instance.values() for g in gts}
        | {d[4] for _, dets in instance.values() for d in dets}
    )

    def class_map(thr: float) -> Optional[float]:
        matched = naive_match(instance, thr)
        aps = []
        for cls in classes:
            ranked = []
            index = 0
            for image_id in sorted(instance):
                _, dets = instance[image_id]
                for i, det in enumerate(dets):
                    if det[4] == cls:
                        ranked.append(((-det[5], -_area(det), index), matched[image_id][i]))
                    index += 1
            ranked.sort(key=lambda item: item[0])
            n_gt = sum(1 for gts, _ in instance.values() for g in gts if g[4] == cls)
            ap = naive_ap([flag for _, flag in ranked], n_gt)
            if ap is not None:
                aps.append(ap)
        return sum(aps) / len(aps) if aps else None

    per_threshold = [class_map(t) for t in thresholds]
    present = [v for v in per_threshold if v is not None]

    kept = {
        image_id: (gts, [d for d in dets if d[5] >= confidence_threshold])
        for image_id, (gts, dets) in instance.items()
    }
    matched = naive_match(kept, 0.5)
    tp = sum(sum(flags) for flags in matched.values())
    n_pred = sum(len(dets) for _, dets in kept.values())
    n_gt = sum(len(gts) for gts, _ in instance.values())
    return {
        "precision": tp / n_pred if n_pred else None,
        "recall": tp / n_gt if n_gt else None,
        "map50": class_map(0.5),
        "map5095": sum(present) / len(present) if present else None,
    }
