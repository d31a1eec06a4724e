"""Detection metrics: IoU, greedy matching, interpolated AP, P/R/mAP reports."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from rollscan.common.exceptions import DataValidationError
from rollscan.constants import (
    INTERPOLATION_11,
    INTERPOLATION_101,
    INTERPOLATION_ALL,
    IOU_THRESHOLD_COARSE,
)
from rollscan.models.annotation import BBox, Detection, DetectionSet, GroundTruthSet, check_consistent
from rollscan.models.report import METRIC_NAMES, EvalReport, MetricConfig, ReportComparison

logger = logging.getLogger(__name__)

_SAMPLE_COUNTS = {INTERPOLATION_101: 101, INTERPOLATION_11: 11}


def iou(a: BBox, b: BBox) -> float:
    """
    Intersection over union of two boxes.

    Returns 0.0 when the union has zero area (two degenerate boxes).
    """
    iw = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    ih = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    inter = iw * ih if iw > 0 and ih > 0 else 0.0
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def _rank_key(det: Detection, index: int) -> Tuple[float, float, int]:
    # confidence desc, then larger box, then input order
    return (-det.confidence, -det.box.area, index)


@dataclass
class MatchResult:
    """
    Outcome of greedy matching at one IoU threshold.

    ``det_matched[image_id][i]`` refers to the i-th detection of that image in
    DetectionSet order; ``gt_matched[image_id][j]`` to the j-th GT box.
    """

    iou_threshold: float
    det_matched: Dict[str, List[bool]] = field(default_factory=dict)
    gt_matched: Dict[str, List[bool]] = field(default_factory=dict)

    @property
    def true_positives(self) -> int:
        """Matched detections."""
        return sum(sum(flags) for flags in self.det_matched.values())

    @property
    def false_positives(self) -> int:
        """Unmatched detections."""
        return sum(len(flags) - sum(flags) for flags in self.det_matched.values())

    @property
    def false_negatives(self) -> int:
        """Unmatched GT boxes."""
        return sum(len(flags) - sum(flags) for flags in self.gt_matched.values())


def _match_image(
    dets: Sequence[Detection],
    boxes: Sequence[BBox],
    iou_thr: float,
) -> Tuple[List[bool], List[bool]]:
    det_flags = [False] * len(dets)
    gt_flags = [False] * len(boxes)
    order = sorted(range(len(dets)), key=lambda i: _rank_key(dets[i], i))
    for i in order:
        det = dets[i]
        best_j, best_iou = -1, iou_thr
        for j, box in enumerate(boxes):
            if gt_flags[j] or box.class_id != det.box.class_id:
                continue
            overlap = iou(det.box, box)
            if overlap >= best_iou and (best_j < 0 or overlap > best_iou):
                best_j, best_iou = j, overlap
        if best_j >= 0:
            det_flags[i] = True
            gt_flags[best_j] = True
    return det_flags, gt_flags


def match_detections(dets: DetectionSet, gts: GroundTruthSet, iou_thr: float) -> MatchResult:
    """
    Greedy per-image, per-class matching.

    Detections are visited by confidence (ties: larger area, then input
    order); each takes the unmatched same-class GT with the highest IoU
    at or above ``iou_thr`` (ties: lowest GT index). A GT matches at most once.

    Raises:
        DataValidationError: If detections reference images unknown to the GT set
    """
    is_valid, error = check_consistent(dets, gts)
    if not is_valid:
        raise DataValidationError(error)

    result = MatchResult(iou_threshold=iou_thr)
    for image_id in gts.image_ids():
        image_dets = dets.get(image_id)
        det_flags, gt_flags = _match_image(image_dets, gts.get(image_id), iou_thr)
        result.det_matched[image_id] = det_flags
        result.gt_matched[image_id] = gt_flags
    return result


def average_precision(
    flags: Sequence[bool],
    n_gt: int,
    interpolation: str = INTERPOLATION_101,
) -> Optional[float]:
    """
    Interpolated AP of a ranked list of match flags.

    Precision is made non-increasing from the right, then sampled at evenly
    spaced recall levels (first rank reaching each level, 0 if none does) or
    integrated over every recall step for ``all-points``.

    Args:
        flags: True for a true positive, in rank order
        n_gt: Number of GT boxes
        interpolation: One of INTERPOLATIONS

    Returns:
        AP in [0, 1]; None when there are neither GT boxes nor detections
    """
    if n_gt < 0:
        raise DataValidationError(f"n_gt must be non-negative, got {n_gt}")
    if n_gt == 0:
        return None if len(flags) == 0 else 0.0
    if len(flags) == 0:
        return 0.0

    hits = np.asarray(flags, dtype=bool)
    tp = np.cumsum(hits)
    fp = np.cumsum(~hits)
    recall = tp / n_gt
    precision = tp / (tp + fp)
    envelope = np.maximum.accumulate(precision[::-1])[::-1]

    if interpolation == INTERPOLATION_ALL:
        steps = np.diff(np.concatenate(([0.0], recall)))
        return float(np.sum(steps * envelope))

    count = _SAMPLE_COUNTS.get(interpolation)
    if count is None:
        raise DataValidationError(f"Unknown interpolation '{interpolation}'")
    levels = np.arange(count) / (count - 1)
    index = np.searchsorted(recall, levels, side="left")
    sampled = np.where(index < len(envelope), envelope[np.minimum(index, len(envelope) - 1)], 0.0)
    return float(np.mean(sampled))


def _class_mean(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return sum(present) / len(present)


def _ranked_flags(
    dets: DetectionSet,
    match: MatchResult,
    class_id: int,
) -> List[bool]:
    ranked = []
    index = 0
    for image_id, image_dets in dets.items():
        flags = match.det_matched.get(image_id, [])
        for det, flag in zip(image_dets, flags):
            if det.box.class_id == class_id:
                ranked.append((_rank_key(det, index), flag))
            index += 1
    ranked.sort(key=lambda item: item[0])
    return [flag for _, flag in ranked]


def _per_class_ap(
    dets: DetectionSet,
    gts: GroundTruthSet,
    classes: Sequence[int],
    iou_thr: float,
    interpolation: str,
) -> Dict[int, Optional[float]]:
    match = match_detections(dets, gts, iou_thr)
    result = {}
    for class_id in classes:
        n_gt = sum(1 for box in gts.all_items() if box.class_id == class_id)
        result[class_id] = average_precision(_ranked_flags(dets, match, class_id), n_gt, interpolation)
    return result


def _above_threshold(dets: DetectionSet, threshold: float) -> DetectionSet:
    kept = DetectionSet()
    for image_id, image_dets in dets.items():
        info = dets.image_info(image_id)
        kept.add_image(image_id, info.width, info.height, info.coco_id)
        for det in image_dets:
            if det.confidence >= threshold:
                kept.add(image_id, det)
    return kept


def evaluate(
    dets: DetectionSet,
    gts: GroundTruthSet,
    config: Optional[MetricConfig] = None,
    label: str = "",
) -> EvalReport:
    """
    Compute P, R, mAP@0.5 and mAP@0.5:0.95.

    P and R are micro-averaged at ``config.confidence_threshold`` with IoU 0.5
    matching; P is None without predictions, R is None without GT. mAPs are
    class means over the union of GT and detection classes, skipping absent APs.

    Raises:
        DataValidationError: If detections reference images unknown to the GT set
    """
    config = config or MetricConfig()
    classes = sorted(set(gts.class_ids()) | set(dets.class_ids()))

    per_threshold: List[Tuple[float, Optional[float]]] = []
    per_class_cache: Dict[float, Dict[int, Optional[float]]] = {}
    for thr in config.iou_thresholds:
        per_class = _per_class_ap(dets, gts, classes, thr, config.interpolation)
        per_class_cache[thr] = per_class
        per_threshold.append((thr, _class_mean(list(per_class.values()))))

    per_class_50 = per_class_cache.get(IOU_THRESHOLD_COARSE)
    if per_class_50 is None:
        per_class_50 = _per_class_ap(dets, gts, classes, IOU_THRESHOLD_COARSE, config.interpolation)
    map50 = _class_mean(list(per_class_50.values()))

    present = [ap for _, ap in per_threshold if ap is not None]
    map5095 = sum(present) / len(present) if present else None

    kept = _above_threshold(dets, config.confidence_threshold)
    match = match_detections(kept, gts, IOU_THRESHOLD_COARSE)
    n_pred = kept.count()
    n_gt = gts.count()
    tp = match.true_positives
    precision = tp / n_pred if n_pred else None
    recall = tp / n_gt if n_gt else None

    report = EvalReport(
        precision=precision,
        recall=recall,
        map50=map50,
        map5095=map5095,
        per_threshold_ap=per_threshold,
        per_class_ap50=per_class_50,
        config=config,
        label=label,
        counts={
            "images": len(gts),
            "gt_boxes": n_gt,
            "detections": dets.count(),
            "detections_above_threshold": n_pred,
            "true_positives_50": tp,
        },
    )
    logger.info(f"Evaluated {dets.count()} detections against {n_gt} GT boxes: {report!r}")
    return report


def compare_reports(a: EvalReport, b: EvalReport) -> ReportComparison:
    """
    Per-metric absolute delta (a - b) and relative deviation |a - b| / max(a, b).

    A metric absent from either report yields absent deviations; relative
    deviation is 0 when both values are 0.
    """
    values = {}
    deltas: Dict[str, Optional[float]] = {}
    relative: Dict[str, Optional[float]] = {}
    for name in METRIC_NAMES:
        va, vb = a.metric(name), b.metric(name)
        values[name] = (va, vb)
        if va is None or vb is None:
            deltas[name] = None
            relative[name] = None
            continue
        deltas[name] = va - vb
        largest = max(va, vb)
        relative[name] = abs(va - vb) / largest if largest > 0 else 0.0
    return ReportComparison(a.label or "a", b.label or "b", values, deltas, relative)
