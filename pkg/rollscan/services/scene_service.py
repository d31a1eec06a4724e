"""Deterministic 2D scene rendering and analytic ground truth."""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from rollscan.common.exceptions import ConfigError, ValidationError
from rollscan.models.annotation import BBox, Track, pixel_span
from rollscan.models.image import FrameSequence, ImageBuffer
from rollscan.models.readout import ReadoutModel
from rollscan.models.scene import (
    Actor,
    GeneratorConfig,
    Scene,
    ShapeKind,
    Trajectory,
)

logger = logging.getLogger(__name__)


def position_at(traj: Trajectory, t: float) -> Tuple[float, float]:
    """
    Actor centre at time ``t``.

    Piecewise-linear between waypoints, clamped to the first/last waypoint
    outside their time range.

    Raises:
        ValidationError: If t is negative
    """
    if t < 0:
        raise ValidationError(f"Time must be non-negative, got {t}")
    return traj.interpolate(t)


def gt_box(actor: Actor, t: float, canvas: Optional[Tuple[int, int]] = None) -> Optional[BBox]:
    """
    Tight box of the actor's shape at time ``t``.

    Args:
        actor: Actor
        t: Time in seconds
        canvas: (width, height) to clip against; None for the unclipped box

    Returns:
        The box, or None when a clipped box is fully off-canvas
    """
    cx, cy = position_at(actor.trajectory, t)
    half_w, half_h = actor.size[0] / 2.0, actor.size[1] / 2.0
    box = BBox(cx - half_w, cy - half_h, cx + half_w, cy + half_h, actor.class_id)
    if canvas is None:
        return box
    clipped = box.clamp(canvas[0], canvas[1])
    return None if clipped.is_empty() else clipped


def _draw_actor(canvas: np.ndarray, actor: Actor, t: float) -> None:
    height, width = canvas.shape[:2]
    box = gt_box(actor, t)
    r0, r1 = box.row_span()
    c0, c1 = box.col_span()
    r0, r1 = max(r0, 0), min(r1, height)
    c0, c1 = max(c0, 0), min(c1, width)
    if r0 >= r1 or c0 >= c1:
        return

    if actor.shape is ShapeKind.RECTANGLE:
        canvas[r0:r1, c0:c1] = actor.color
        return

    cx = (box.x_min + box.x_max) / 2.0
    cy = (box.y_min + box.y_max) / 2.0
    ys = (np.arange(r0, r1, dtype=np.float64) + 0.5 - cy) / (box.height / 2.0)
    xs = (np.arange(c0, c1, dtype=np.float64) + 0.5 - cx) / (box.width / 2.0)
    inside = ys[:, None] ** 2 + xs[None, :] ** 2 < 1.0
    canvas[r0:r1, c0:c1][inside] = actor.color


def render_frame(scene: Scene, t: float) -> ImageBuffer:
    """
    Rasterize the scene at time ``t``.

    Background fill, then every actor in list order with hard edges; a pixel
    is covered when its centre lies inside the shape. Off-canvas parts clip.
    """
    canvas = np.empty((scene.height, scene.width, 3), dtype=np.uint8)
    canvas[:, :] = scene.background
    for actor in scene.actors:
        _draw_actor(canvas, actor, t)
    return ImageBuffer(canvas)


def burst_times(model: ReadoutModel, start_time: float = 0.0) -> List[float]:
    """Capture times t_k = start + k / (gs_frame_rate * F) of one burst."""
    rate = model.source_frame_rate
    return [start_time + k / rate for k in range(model.frames_per_capture)]


def render_burst(scene: Scene, model: ReadoutModel, start_time: float = 0.0) -> FrameSequence:
    """Render the F-frame GS burst of one capture, starting at ``start_time``."""
    frames = [render_frame(scene, t) for t in burst_times(model, start_time)]
    logger.debug(f"Rendered burst of {len(frames)} frames at {model.source_frame_rate} fps")
    return FrameSequence(frames, model.source_frame_rate)


def gt_tracks(scene: Scene, model: ReadoutModel, start_time: float = 0.0) -> List[Track]:
    """Per-actor unclipped GT boxes over every frame of one burst."""
    times = burst_times(model, start_time)
    return [
        Track(actor.id, tuple(gt_box(actor, t) for t in times))
        for actor in scene.actors
    ]


def random_scene(params: GeneratorConfig, seed: Optional[int] = None) -> Scene:
    """
    Draw a randomized crowd.

    Every random quantity is drawn before ``speed_multiplier`` is applied, so
    the same seed yields the same geometry at every multiplier.

    Args:
        params: Generator ranges
        seed: RNG seed; falls back to ``params.seed``

    Returns:
        Scene whose actors move linearly for ``params.duration_s`` seconds

    Raises:
        ConfigError: If no seed is available
    """
    seed = params.seed if seed is None else seed
    if seed is None:
        raise ConfigError("A seed is required for randomized scenes")

    rng = np.random.default_rng(seed)
    width, height = params.canvas
    count = int(rng.integers(params.actor_count_range[0], params.actor_count_range[1] + 1))
    shapes = [ShapeKind(s) for s in params.shapes]
    scale = params.speed_multiplier * params.px_per_meter

    actors = []
    for actor_id in range(count):
        shape = shapes[int(rng.integers(len(shapes)))]
        w = float(rng.uniform(*params.size_range_px[0]))
        h = float(rng.uniform(*params.size_range_px[1]))
        color = tuple(int(c) for c in rng.integers(0, 256, size=3))
        # starts fully in view (centred when larger than the canvas)
        start = (
            float(rng.uniform(min(w / 2, width / 2), max(width - w / 2, width / 2))),
            float(rng.uniform(min(h / 2, height / 2), max(height - h / 2, height / 2))),
        )
        speed_mps = float(rng.uniform(*params.speed_range_mps))
        heading = math.radians(float(rng.uniform(*params.heading_range_deg)))

        speed_px = speed_mps * scale
        velocity = (speed_px * math.cos(heading), speed_px * math.sin(heading))
        actors.append(
            Actor(
                actor_id=actor_id,
                shape=shape,
                size=(w, h),
                color=color,
                trajectory=Trajectory.linear(start, velocity, params.duration_s),
            )
        )

    logger.debug(f"Generated scene with {count} actors (seed={seed})")
    return Scene(
        width=width,
        height=height,
        actors=actors,
        background=params.background,
        px_per_meter=params.px_per_meter,
        rng_seed=seed,
    )
