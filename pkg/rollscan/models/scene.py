"""Scene, actor, trajectory and random-scene generator models."""

import math
from enum import Enum
from typing import Optional, Dict, Any, Tuple, List, Sequence

import numpy as np

from rollscan.common.base import BaseModel
from rollscan.common.exceptions import ConfigError, ValidationError
from rollscan.common.validators import (
    ChoiceValidator,
    KeySetValidator,
    NumberRangeValidator,
    RangePairValidator,
    RGBValidator,
)
from rollscan.constants import (
    DEFAULT_BACKGROUND,
    DEFAULT_CLASS_ID,
    DEFAULT_PX_PER_METER,
    REFERENCE_MAX_WALKING_SPEED_MPS,
    RGB,
    SHAPE_ELLIPSE,
    SHAPE_RECTANGLE,
    SHAPES,
)

Waypoint = Tuple[float, Tuple[float, float]]


class ShapeKind(Enum):
    """Rasterizable actor shapes."""

    RECTANGLE = SHAPE_RECTANGLE
    ELLIPSE = SHAPE_ELLIPSE


class Trajectory(BaseModel):
    """Piecewise-linear path through timed waypoints, clamped outside its range."""

    def __init__(self, waypoints: Sequence[Waypoint]) -> None:
        """Initialize Trajectory."""
        self.waypoints: Tuple[Waypoint, ...] = tuple(
            (float(t), (float(p[0]), float(p[1]))) for t, p in waypoints
        )
        self.validate_or_raise()
        self._times = np.array([t for t, _ in self.waypoints], dtype=np.float64)
        self._xs = np.array([p[0] for _, p in self.waypoints], dtype=np.float64)
        self._ys = np.array([p[1] for _, p in self.waypoints], dtype=np.float64)

    @classmethod
    def stationary(cls, x: float, y: float) -> "Trajectory":
        """A trajectory that never moves."""
        return cls([(0.0, (x, y))])

    @classmethod
    def linear(cls, start: Tuple[float, float], velocity: Tuple[float, float], duration: float) -> "Trajectory":
        """Constant-velocity motion (px/s) from ``start`` over ``duration`` seconds."""
        end = (start[0] + velocity[0] * duration, start[1] + velocity[1] * duration)
        return cls([(0.0, start), (duration, end)])

    @property
    def times(self) -> np.ndarray:
        """Waypoint times."""
        return self._times

    def interpolate(self, t: float) -> Tuple[float, float]:
        """Raw piecewise-linear interpolation with end clamping."""
        x = float(np.interp(t, self._times, self._xs))
        y = float(np.interp(t, self._times, self._ys))
        return x, y

    def max_speed(self) -> float:
        """Largest segment speed in px/s."""
        speeds = [0.0]
        for (t0, p0), (t1, p1) in zip(self.waypoints, self.waypoints[1:]):
            speeds.append(math.hypot(p1[0] - p0[0], p1[1] - p0[1]) / (t1 - t0))
        return max(speeds)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate trajectory."""
        if not self.waypoints:
            return False, "Trajectory needs at least one waypoint"

        values = [t for t, _ in self.waypoints] + [c for _, p in self.waypoints for c in p]
        if not all(math.isfinite(v) for v in values):
            return False, "Waypoint values must be finite"

        for (t0, _), (t1, _) in zip(self.waypoints, self.waypoints[1:]):
            if t1 <= t0:
                return False, "Waypoint times must be strictly increasing"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "waypoints": [[t, [p[0], p[1]]] for t, p in self.waypoints],
            "interpolation": "piecewise-linear",
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Trajectory":
        """Create from dictionary."""
        return cls([(w[0], (w[1][0], w[1][1])) for w in data["waypoints"]])

    def __eq__(self, other: object) -> bool:
        """Value equality."""
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.waypoints == other.waypoints

    __hash__ = None  # type: ignore[assignment]


class Actor(BaseModel):
    """A moving shape standing in for one pedestrian."""

    def __init__(
        self,
        actor_id: int,
        shape: ShapeKind,
        size: Tuple[float, float],
        color: RGB,
        trajectory: Trajectory,
        class_id: int = DEFAULT_CLASS_ID,
    ) -> None:
        """Initialize Actor."""
        self.id = actor_id
        self.shape = shape
        self.size = (float(size[0]), float(size[1]))
        self.color = tuple(color)
        self.trajectory = trajectory
        self.class_id = class_id
        self.validate_or_raise()

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate actor."""
        if not isinstance(self.shape, ShapeKind):
            return False, "Shape must be a ShapeKind"

        if self.size[0] < 1 or self.size[1] < 1:
            return False, f"Actor {self.id}: size components must be at least 1 px"

        is_valid, error = RGBValidator().validate(list(self.color))
        if not is_valid:
            return False, f"Actor {self.id}: {error}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "id": self.id,
            "shape": self.shape.value,
            "size": [self.size[0], self.size[1]],
            "color": list(self.color),
            "trajectory": self.trajectory.to_dict(),
            "class_id": self.class_id,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Actor":
        """Create from dictionary."""
        return cls(
            actor_id=data["id"],
            shape=ShapeKind(data["shape"]),
            size=(data["size"][0], data["size"][1]),
            color=tuple(data["color"]),
            trajectory=Trajectory.from_dict(data["trajectory"]),
            class_id=data.get("class_id", DEFAULT_CLASS_ID),
        )

    def __repr__(self) -> str:
        """String representation."""
        return f"Actor(id={self.id}, shape={self.shape.value}, size={self.size})"


class Scene(BaseModel):
    """
    2D scene rendered in actor list order (later actors occlude earlier).
    """

    def __init__(
        self,
        width: int,
        height: int,
        actors: Sequence[Actor] = (),
        background: RGB = DEFAULT_BACKGROUND,
        px_per_meter: float = DEFAULT_PX_PER_METER,
        rng_seed: Optional[int] = None,
    ) -> None:
        """Initialize Scene."""
        self.width = width
        self.height = height
        self.actors: Tuple[Actor, ...] = tuple(actors)
        self.background = tuple(background)
        self.px_per_meter = float(px_per_meter)
        self.rng_seed = rng_seed
        self.validate_or_raise()

    @property
    def size(self) -> Tuple[int, int]:
        """(width, height)."""
        return self.width, self.height

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate scene."""
        dimension = NumberRangeValidator(minimum=1, integer=True)
        for name, value in (("width", self.width), ("height", self.height)):
            is_valid, error = dimension.validate(value)
            if not is_valid:
                return False, f"Canvas {name}: {error}"

        is_valid, error = RGBValidator().validate(list(self.background))
        if not is_valid:
            return False, f"Background: {error}"

        if not self.px_per_meter > 0:
            return False, "px_per_meter must be positive"

        ids = [actor.id for actor in self.actors]
        if len(ids) != len(set(ids)):
            return False, "Actor ids must be unique within a scene"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "width": self.width,
            "height": self.height,
            "background": list(self.background),
            "actors": [actor.to_dict() for actor in self.actors],
            "px_per_meter": self.px_per_meter,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Scene":
        """
        Create from a scene JSON object.

        Raises:
            ConfigError: If the object has unknown or missing fields
        """
        is_valid, error = KeySetValidator(
            ["width", "height", "background", "actors", "px_per_meter", "rng_seed"],
            required=["width", "height"],
        ).validate(data)
        if not is_valid:
            raise ConfigError(f"scene: {error}")
        try:
            return cls(
                width=data["width"],
                height=data["height"],
                actors=[Actor.from_dict(a) for a in data.get("actors", [])],
                background=tuple(data.get("background", DEFAULT_BACKGROUND)),
                px_per_meter=data.get("px_per_meter", DEFAULT_PX_PER_METER),
                rng_seed=data.get("rng_seed"),
            )
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise ConfigError(f"scene: malformed actor or field ({e})") from e
        except ValidationError as e:
            raise ConfigError(f"scene: {e.message}") from e

    def __repr__(self) -> str:
        """String representation."""
        return f"Scene({self.width}x{self.height}, actors={len(self.actors)})"


class GeneratorConfig(BaseModel):
    """
    Ranges from which ``random_scene`` draws a randomized crowd.

    Speeds are in m/s and scaled by ``speed_multiplier`` and ``px_per_meter``.
    """

    FIELDS: List[str] = [
        "actor_count_range",
        "size_range_px",
        "speed_range_mps",
        "speed_multiplier",
        "px_per_meter",
        "canvas",
        "seed",
        "heading_range_deg",
        "shapes",
        "duration_s",
        "background",
    ]

    def __init__(
        self,
        canvas: Tuple[int, int],
        actor_count_range: Tuple[int, int] = (1, 8),
        size_range_px: Tuple[Tuple[float, float], Tuple[float, float]] = ((20.0, 45.0), (60.0, 100.0)),
        speed_range_mps: Tuple[float, float] = (0.0, REFERENCE_MAX_WALKING_SPEED_MPS),
        speed_multiplier: float = 1.0,
        px_per_meter: float = DEFAULT_PX_PER_METER,
        seed: Optional[int] = None,
        heading_range_deg: Tuple[float, float] = (0.0, 360.0),
        shapes: Sequence[str] = (SHAPE_RECTANGLE, SHAPE_ELLIPSE),
        duration_s: float = 1.0,
        background: RGB = DEFAULT_BACKGROUND,
    ) -> None:
        """Initialize GeneratorConfig."""
        self.canvas = (canvas[0], canvas[1])
        self.actor_count_range = (actor_count_range[0], actor_count_range[1])
        self.size_range_px = (tuple(size_range_px[0]), tuple(size_range_px[1]))
        self.speed_range_mps = (speed_range_mps[0], speed_range_mps[1])
        self.speed_multiplier = speed_multiplier
        self.px_per_meter = px_per_meter
        self.seed = seed
        self.heading_range_deg = (heading_range_deg[0], heading_range_deg[1])
        self.shapes = list(shapes)
        self.duration_s = duration_s
        self.background = tuple(background)
        self.validate_or_raise()

    def with_overrides(self, **changes: Any) -> "GeneratorConfig":
        """Return a copy with some fields replaced."""
        data = self.to_dict()
        data.update(changes)
        return GeneratorConfig.from_dict(data)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate generator ranges."""
        positive_int = NumberRangeValidator(minimum=1, integer=True)
        count = RangePairValidator(NumberRangeValidator(minimum=0, integer=True))
        size = RangePairValidator(NumberRangeValidator(minimum=1))
        speed = RangePairValidator(NumberRangeValidator(minimum=0))
        heading = RangePairValidator(NumberRangeValidator())

        checks = [
            ("canvas", positive_int, self.canvas[0]),
            ("canvas", positive_int, self.canvas[1]),
            ("actor_count_range", count, list(self.actor_count_range)),
            ("size_range_px[0]", size, list(self.size_range_px[0])),
            ("size_range_px[1]", size, list(self.size_range_px[1])),
            ("speed_range_mps", speed, list(self.speed_range_mps)),
            ("speed_multiplier", NumberRangeValidator(minimum=0), self.speed_multiplier),
            ("px_per_meter", NumberRangeValidator(minimum=0, exclusive_minimum=True), self.px_per_meter),
            ("heading_range_deg", heading, list(self.heading_range_deg)),
            ("duration_s", NumberRangeValidator(minimum=0, exclusive_minimum=True), self.duration_s),
            ("background", RGBValidator(), list(self.background)),
        ]
        for name, validator, value in checks:
            is_valid, error = validator.validate(value)
            if not is_valid:
                return False, f"{name}: {error}"

        if self.seed is not None:
            is_valid, error = NumberRangeValidator(minimum=0, integer=True).validate(self.seed)
            if not is_valid:
                return False, f"seed: {error}"

        if not self.shapes:
            return False, "shapes: at least one shape is required"
        for shape in self.shapes:
            is_valid, error = ChoiceValidator(SHAPES).validate(shape)
            if not is_valid:
                return False, f"shapes: {error}"

        return True, None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the generator-config JSON object."""
        return {
            "actor_count_range": list(self.actor_count_range),
            "size_range_px": [list(self.size_range_px[0]), list(self.size_range_px[1])],
            "speed_range_mps": list(self.speed_range_mps),
            "speed_multiplier": self.speed_multiplier,
            "px_per_meter": self.px_per_meter,
            "canvas": list(self.canvas),
            "seed": self.seed,
            "heading_range_deg": list(self.heading_range_deg),
            "shapes": list(self.shapes),
            "duration_s": self.duration_s,
            "background": list(self.background),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratorConfig":
        """
        Create from the generator-config JSON object.

        Raises:
            ConfigError: On unknown, missing or invalid fields
        """
        is_valid, error = KeySetValidator(cls.FIELDS, required=["canvas"]).validate(data)
        if not is_valid:
            raise ConfigError(f"generator: {error}")
        kwargs = {key: value for key, value in data.items() if value is not None or key == "seed"}
        try:
            return cls(**kwargs)
        except (TypeError, IndexError, KeyError) as e:
            raise ConfigError(f"generator: malformed field ({e})") from e
        except ValidationError as e:
            raise ConfigError(f"generator: {e.message}") from e
