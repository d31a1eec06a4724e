"""Metric configuration, evaluation reports and report comparisons."""

from typing import Optional, Dict, Any, Tuple, List, Sequence

from rollscan.common.base import BaseModel
from rollscan.common.exceptions import ConfigError, ValidationError
from rollscan.common.validators import ChoiceValidator, KeySetValidator, NumberRangeValidator
from rollscan.constants import (
    ABSENT_MARKER,
    COCO_IOU_THRESHOLDS,
    DEFAULT_CONFIDENCE_THRESHOLD,
    INTERPOLATION_101,
    INTERPOLATIONS,
)

METRIC_NAMES: List[str] = ["precision", "recall", "map50", "map5095"]
METRIC_HEADERS: Dict[str, str] = {
    "precision": "P",
    "recall": "R",
    "map50": "mAP@0.5",
    "map5095": "mAP@0.5:0.95",
}


def format_metric(value: Optional[float], digits: int = 4) -> str:
    """Format a metric value, using the absent marker for None."""
    return ABSENT_MARKER if value is None else f"{value:.{digits}f}"


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Render an aligned plain-text table."""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

    def line(cells: Sequence[str]) -> str:
        return " | ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    separator = "-+-".join("-" * w for w in widths)
    return "\n".join([line(headers), separator] + [line(row) for row in rows]) + "\n"


class MetricConfig(BaseModel):
    """IoU thresholds, P/R operating point and AP interpolation scheme."""

    FIELDS: List[str] = ["iou_thresholds", "confidence_threshold", "interpolation"]

    def __init__(
        self,
        iou_thresholds: Sequence[float] = tuple(COCO_IOU_THRESHOLDS),
        confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
        interpolation: str = INTERPOLATION_101,
    ) -> None:
        """Initialize MetricConfig."""
        self.iou_thresholds: Tuple[float, ...] = tuple(iou_thresholds)
        self.confidence_threshold = confidence_threshold
        self.interpolation = interpolation
        self.validate_or_raise()

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate metric config."""
        if not self.iou_thresholds:
            return False, "iou_thresholds must not be empty"

        threshold = NumberRangeValidator(minimum=0.0, maximum=1.0, exclusive_minimum=True)
        for value in self.iou_thresholds:
            is_valid, error = threshold.validate(value)
            if not is_valid:
                return False, f"iou_thresholds: {error}"

        for low, high in zip(self.iou_thresholds, self.iou_thresholds[1:]):
            if high <= low:
                return False, "iou_thresholds must be strictly increasing"

        is_valid, error = NumberRangeValidator(minimum=0.0, maximum=1.0).validate(self.confidence_threshold)
        if not is_valid:
            return False, f"confidence_threshold: {error}"

        is_valid, error = ChoiceValidator(INTERPOLATIONS).validate(self.interpolation)
        if not is_valid:
            return False, f"interpolation: {error}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "iou_thresholds": list(self.iou_thresholds),
            "confidence_threshold": self.confidence_threshold,
            "interpolation": self.interpolation,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricConfig":
        """
        Create from the metrics JSON object.

        Raises:
            ConfigError: On unknown or invalid fields
        """
        is_valid, error = KeySetValidator(cls.FIELDS).validate(data)
        if not is_valid:
            raise ConfigError(f"metrics: {error}")
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f"metrics: malformed field ({e})") from e
        except ValidationError as e:
            raise ConfigError(f"metrics: {e.message}") from e


class EvalReport(BaseModel):
    """P / R / mAP@0.5 / mAP@0.5:0.95 summary of one evaluation."""

    def __init__(
        self,
        precision: Optional[float],
        recall: Optional[float],
        map50: Optional[float],
        map5095: Optional[float],
        per_threshold_ap: Sequence[Tuple[float, Optional[float]]] = (),
        per_class_ap50: Optional[Dict[int, Optional[float]]] = None,
        config: Optional[MetricConfig] = None,
        label: str = "",
        counts: Optional[Dict[str, int]] = None,
    ) -> None:
        """Initialize EvalReport."""
        self.precision = precision
        self.recall = recall
        self.map50 = map50
        self.map5095 = map5095
        self.per_threshold_ap = [(float(t), ap) for t, ap in per_threshold_ap]
        self.per_class_ap50 = dict(per_class_ap50 or {})
        self.config = config or MetricConfig()
        self.label = label
        self.counts = dict(counts or {})
        self.validate_or_raise()

    def metric(self, name: str) -> Optional[float]:
        """Value of one of METRIC_NAMES."""
        return getattr(self, name)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate metric ranges."""
        for name in METRIC_NAMES:
            value = self.metric(name)
            if value is not None and not 0.0 <= value <= 1.0:
                return False, f"{name} must lie in [0, 1], got {value}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "label": self.label,
            "precision": self.precision,
            "recall": self.recall,
            "map50": self.map50,
            "map5095": self.map5095,
            "per_threshold_ap": [
                {"iou_threshold": t, "ap": ap} for t, ap in self.per_threshold_ap
            ],
            "per_class_ap50": {str(k): v for k, v in sorted(self.per_class_ap50.items())},
            "counts": dict(sorted(self.counts.items())),
            "config": self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvalReport":
        """
        Create from a report JSON object.

        Raises:
            ValidationError: If required fields are missing
        """
        try:
            return cls(
                precision=data.get("precision"),
                recall=data.get("recall"),
                map50=data.get("map50"),
                map5095=data.get("map5095"),
                per_threshold_ap=[
                    (entry["iou_threshold"], entry["ap"]) for entry in data.get("per_threshold_ap", [])
                ],
                per_class_ap50={int(k): v for k, v in data.get("per_class_ap50", {}).items()},
                config=MetricConfig.from_dict(data["config"]) if "config" in data else None,
                label=data.get("label", ""),
                counts=data.get("counts"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Malformed report: {e}") from e

    def table_row(self) -> List[str]:
        """Cells for the text table."""
        return [self.label or "-"] + [format_metric(self.metric(n)) for n in METRIC_NAMES]

    def render_text(self) -> str:
        """Aligned text table mirroring the P | R | mAP columns."""
        headers = ["Dataset"] + [METRIC_HEADERS[n] for n in METRIC_NAMES]
        table = render_table(headers, [self.table_row()])
        return (
            table
            + f"confidence_threshold = {self.config.confidence_threshold}\n"
            + f"interpolation = {self.config.interpolation}\n"
        )

    def __repr__(self) -> str:
        """String representation."""
        cells = ", ".join(f"{n}={format_metric(self.metric(n))}" for n in METRIC_NAMES)
        return f"EvalReport({cells})"


class ReportComparison(BaseModel):
    """Per-metric absolute deltas and relative deviations between two reports."""

    def __init__(
        self,
        label_a: str,
        label_b: str,
        values: Dict[str, Tuple[Optional[float], Optional[float]]],
        deltas: Dict[str, Optional[float]],
        relative: Dict[str, Optional[float]],
    ) -> None:
        """Initialize ReportComparison."""
        self.label_a = label_a
        self.label_b = label_b
        self.values = values
        self.deltas = deltas
        self.relative = relative

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate comparison keys."""
        if set(self.deltas) != set(METRIC_NAMES) or set(self.relative) != set(METRIC_NAMES):
            return False, "Comparison must cover every metric"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "a": self.label_a,
            "b": self.label_b,
            "metrics": {
                name: {
                    "a": self.values[name][0],
                    "b": self.values[name][1],
                    "absolute_delta": self.deltas[name],
                    "relative_deviation": self.relative[name],
                }
                for name in METRIC_NAMES
            },
        }

    def render_text(self) -> str:
        """Table of both reports plus labeled absolute and relative deviations."""
        headers = ["Dataset"] + [METRIC_HEADERS[n] for n in METRIC_NAMES]
        rows = [
            [self.label_a or "a"] + [format_metric(self.values[n][0]) for n in METRIC_NAMES],
            [self.label_b or "b"] + [format_metric(self.values[n][1]) for n in METRIC_NAMES],
            ["abs delta (a-b)"] + [format_metric(self.deltas[n]) for n in METRIC_NAMES],
            ["rel deviation"] + [
                ABSENT_MARKER if self.relative[n] is None else f"{100 * self.relative[n]:.2f}%"
                for n in METRIC_NAMES
            ],
        ]
        return render_table(headers, rows)
