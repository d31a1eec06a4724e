"""Run configuration shared by every CLI command."""

import os
from typing import Optional, Dict, Any, Tuple, List, Sequence

from rollscan.common.base import BaseModel
from rollscan.common.exceptions import ConfigError, ValidationError
from rollscan.common.validators import (
    ChoiceValidator,
    KeySetValidator,
    NumberRangeValidator,
)
from rollscan.constants import (
    CONFIG_SCHEMA_VERSION,
    DEFAULT_SPEED_MULTIPLIERS,
    DEFAULT_SPLIT_FRACTIONS,
    DEFAULT_WORKERS,
    ENV_WORKERS,
    FORMAT_BOTH,
    FORMAT_COCO,
    FORMAT_YOLO,
    FRAGMENT_POLICIES,
    FRAGMENT_POLICY_SPLIT,
    LABEL_FORMATS,
)
from rollscan.models.readout import ReadoutModel
from rollscan.models.report import MetricConfig
from rollscan.models.scene import GeneratorConfig, Scene


class RunConfig(BaseModel):
    """
    Resolved run configuration.

    Exactly one of ``scene`` (a fixed scene) or ``generator`` (randomized
    crowds) is set. Generator runs need a seed, either here or in the
    generator block.
    """

    FIELDS: List[str] = [
        "schema_version",
        "scene",
        "generator",
        "readout",
        "captures",
        "metrics",
        "seed",
        "speed_multipliers",
        "workers",
        "format",
        "fragment_policy",
        "splits",
        "write_images",
        "bursts_dir",
    ]

    def __init__(
        self,
        readout: ReadoutModel,
        scene: Optional[Scene] = None,
        generator: Optional[GeneratorConfig] = None,
        captures: int = 1,
        metrics: Optional[MetricConfig] = None,
        seed: Optional[int] = None,
        speed_multipliers: Sequence[float] = tuple(DEFAULT_SPEED_MULTIPLIERS),
        workers: Optional[int] = None,
        label_format: str = FORMAT_BOTH,
        fragment_policy: str = FRAGMENT_POLICY_SPLIT,
        splits: Optional[Dict[str, float]] = None,
        write_images: bool = False,
        bursts_dir: Optional[str] = None,
    ) -> None:
        """Initialize RunConfig."""
        self.readout = readout
        self.scene = scene
        self.generator = generator
        self.captures = captures
        self.metrics = metrics or MetricConfig()
        self.seed = seed
        self.speed_multipliers: Tuple[float, ...] = tuple(speed_multipliers)
        self.workers = workers
        self.label_format = label_format
        self.fragment_policy = fragment_policy
        self.splits = dict(splits if splits is not None else DEFAULT_SPLIT_FRACTIONS)
        self.write_images = write_images
        self.bursts_dir = bursts_dir
        self.validate_or_raise()

    @property
    def effective_seed(self) -> Optional[int]:
        """Run seed, falling back to the generator block's seed."""
        if self.seed is not None:
            return self.seed
        return self.generator.seed if self.generator is not None else None

    @property
    def image_size(self) -> Tuple[int, int]:
        """(width, height) of every composed image."""
        if self.scene is not None:
            return self.scene.size
        return self.generator.canvas

    @property
    def writes_yolo(self) -> bool:
        """True when YOLO labels are requested."""
        return self.label_format in (FORMAT_YOLO, FORMAT_BOTH)

    @property
    def writes_coco(self) -> bool:
        """True when COCO labels are requested."""
        return self.label_format in (FORMAT_COCO, FORMAT_BOTH)

    def resolve_workers(self) -> int:
        """
        Worker count: config value, else ROLLSCAN_WORKERS, else the default.

        Raises:
            ConfigError: If ROLLSCAN_WORKERS is not a positive integer
        """
        if self.workers is not None:
            return self.workers
        raw = os.getenv(ENV_WORKERS)
        if raw is None or raw.strip() == "":
            return DEFAULT_WORKERS
        try:
            value = int(raw)
        except ValueError as e:
            raise ConfigError(f"{ENV_WORKERS} must be a positive integer, got '{raw}'") from e
        if value < 1:
            raise ConfigError(f"{ENV_WORKERS} must be a positive integer, got '{raw}'")
        return value

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate cross-field constraints."""
        if (self.scene is None) == (self.generator is None):
            return False, "exactly one of 'scene' or 'generator' is required"

        height = self.image_size[1]
        if height != self.readout.sensor_rows:
            return False, (
                f"canvas height {height} must equal readout sensor_rows {self.readout.sensor_rows}"
            )

        if self.generator is not None and self.effective_seed is None:
            return False, "seed: required for generator runs"

        positive_int = NumberRangeValidator(minimum=1, integer=True)
        is_valid, error = positive_int.validate(self.captures)
        if not is_valid:
            return False, f"captures: {error}"

        if self.seed is not None:
            is_valid, error = NumberRangeValidator(minimum=0, integer=True).validate(self.seed)
            if not is_valid:
                return False, f"seed: {error}"

        if self.workers is not None:
            is_valid, error = positive_int.validate(self.workers)
            if not is_valid:
                return False, f"workers: {error}"

        if not self.speed_multipliers:
            return False, "speed_multipliers: at least one value is required"
        for value in self.speed_multipliers:
            is_valid, error = NumberRangeValidator(minimum=0).validate(value)
            if not is_valid:
                return False, f"speed_multipliers: {error}"

        is_valid, error = ChoiceValidator(LABEL_FORMATS).validate(self.label_format)
        if not is_valid:
            return False, f"format: {error}"

        is_valid, error = ChoiceValidator(FRAGMENT_POLICIES).validate(self.fragment_policy)
        if not is_valid:
            return False, f"fragment_policy: {error}"

        fraction = NumberRangeValidator(minimum=0, maximum=1)
        for name, value in self.splits.items():
            is_valid, error = fraction.validate(value)
            if not is_valid:
                return False, f"splits.{name}: {error}"
        if self.splits and abs(sum(self.splits.values()) - 1.0) > 1e-9:
            return False, "splits: fractions must sum to 1"

        if not isinstance(self.write_images, bool):
            return False, "write_images: must be true or false"

        if self.bursts_dir is not None and not isinstance(self.bursts_dir, str):
            return False, "bursts_dir: must be a path string"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration, as echoed into output trees."""
        data: Dict[str, Any] = {"schema_version": CONFIG_SCHEMA_VERSION}
        if self.scene is not None:
            data["scene"] = self.scene.to_dict()
        if self.generator is not None:
            data["generator"] = self.generator.to_dict()
        data.update(
            {
                "readout": self.readout.to_dict(),
                "captures": self.captures,
                "metrics": self.metrics.to_dict(),
                "seed": self.effective_seed,
                "speed_multipliers": list(self.speed_multipliers),
                "format": self.label_format,
                "fragment_policy": self.fragment_policy,
                "splits": dict(self.splits),
                "write_images": self.write_images,
            }
        )
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **overrides: Any) -> "RunConfig":
        """
        Create from the run-config JSON object.

        Keyword overrides (``seed``, ``workers``, ``format``, ``bursts_dir``)
        replace config values when not None, before validation.

        Raises:
            ConfigError: On schema mismatch, unknown keys or invalid values
        """
        is_valid, error = KeySetValidator(cls.FIELDS, required=["schema_version", "readout"]).validate(data)
        if not is_valid:
            raise ConfigError(f"run config: {error}")

        if data["schema_version"] != CONFIG_SCHEMA_VERSION:
            raise ConfigError(
                f"run config: schema_version must be {CONFIG_SCHEMA_VERSION}, "
                f"got {data['schema_version']!r}"
            )

        data = dict(data)
        data.update({key: value for key, value in overrides.items() if value is not None})

        readout_data = data["readout"]
        is_valid, error = KeySetValidator(
            ["sensor_rows", "frames_per_capture", "scan_direction", "gs_frame_rate"],
            required=["sensor_rows", "frames_per_capture"],
        ).validate(readout_data)
        if not is_valid:
            raise ConfigError(f"readout: {error}")

        try:
            readout = ReadoutModel.from_dict(readout_data)
        except ValueError as e:
            raise ConfigError(f"readout: {e}") from e
        except ValidationError as e:
            raise ConfigError(f"readout: {e.message}") from e

        scene = Scene.from_dict(data["scene"]) if "scene" in data else None
        generator = GeneratorConfig.from_dict(data["generator"]) if "generator" in data else None
        metrics = MetricConfig.from_dict(data["metrics"]) if "metrics" in data else None

        try:
            return cls(
                readout=readout,
                scene=scene,
                generator=generator,
                captures=data.get("captures", 1),
                metrics=metrics,
                seed=data.get("seed"),
                speed_multipliers=data.get("speed_multipliers", DEFAULT_SPEED_MULTIPLIERS),
                workers=data.get("workers"),
                label_format=data.get("format", FORMAT_BOTH),
                fragment_policy=data.get("fragment_policy", FRAGMENT_POLICY_SPLIT),
                splits=data.get("splits"),
                write_images=data.get("write_images", False),
                bursts_dir=data.get("bursts_dir"),
            )
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"run config: malformed field ({e})") from e
        except ValidationError as e:
            raise ConfigError(f"run config: {e.message}") from e
