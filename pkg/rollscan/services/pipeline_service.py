"""
End-to-end commands: synth, roll, annotate, eval, compare, sweep.

Every command validates its inputs completely before writing anything under
the output directory. Captures run on a thread pool and are reduced in
capture-index order, so output trees do not depend on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from rollscan.common.exceptions import (
    ConfigError,
    DataValidationError,
    ImageIOError,
    ValidationError,
)
from rollscan.constants import (
    CAPTURE_TEMPLATE,
    COCO_FILE,
    COMPARISON_JSON,
    COMPARISON_TEXT,
    REPORT_JSON,
    REPORT_TEXT,
    RUN_CONFIG_ECHO,
    SPLITS_FILE,
    SWEEP_SUMMARY_JSON,
    SWEEP_SUMMARY_TEXT,
    TRACKS_FILE,
    YOLO_SIDECAR,
)
from rollscan.models.annotation import GroundTruthSet, Track
from rollscan.models.readout import ReadoutModel
from rollscan.models.report import (
    METRIC_HEADERS,
    METRIC_NAMES,
    EvalReport,
    MetricConfig,
    ReportComparison,
    format_metric,
    render_table,
)
from rollscan.models.run_config import RunConfig
from rollscan.models.scene import GeneratorConfig, Scene
from rollscan.services.annotation_service import (
    ground_truth_as_detections,
    merge_ground_truth,
    transform_gt_gs,
    transform_gt_rs,
)
from rollscan.services.format_service import (
    read_coco,
    read_detections,
    read_yolo,
    write_coco,
    write_split_manifest,
    write_yolo,
)
from rollscan.services.image_service import (
    PathLike,
    frame_path,
    load_image,
    read_json,
    read_sequence_metadata,
    save_frames,
    save_image,
    write_json,
    write_text,
)
from rollscan.services.metrics_service import compare_reports, evaluate
from rollscan.services.scene_service import burst_times, gt_tracks, random_scene, render_frame
from rollscan.services.shutter_service import compose_rs_streaming

logger = logging.getLogger(__name__)

R = TypeVar("R")

Capture = Tuple[str, Tuple[int, int], List[Track]]


# ============================================================================
# HELPERS
# ============================================================================


def load_run_config(path: PathLike, **overrides: Any) -> RunConfig:
    """
    Read and validate a run-config JSON file.

    Raises:
        ImageIOError: If the file cannot be read
        ConfigError: If the file is not valid JSON or fails validation
    """
    try:
        data = read_json(path)
    except DataValidationError as e:
        raise ConfigError(e.message) from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: run config must be a JSON object")
    config = RunConfig.from_dict(data, **overrides)
    logger.info(f"Loaded run config {path}")
    return config


def capture_id(index: int) -> str:
    """Image id (and directory name) of capture ``index``."""
    return CAPTURE_TEMPLATE.format(index=index)


def capture_seed(seed: int, index: int) -> int:
    """Independent, reproducible seed for capture ``index`` of a run."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def capture_scene(
    config: RunConfig,
    index: int,
    generator: Optional[GeneratorConfig] = None,
) -> Tuple[Scene, float]:
    """
    Scene and burst start time of capture ``index``.

    A fixed scene is captured at consecutive GS frame times; a generator
    draws a fresh scene per capture, starting at t = 0.
    """
    if config.scene is not None:
        return config.scene, index / config.readout.gs_frame_rate
    generator = generator or config.generator
    return random_scene(generator, capture_seed(config.effective_seed, index)), 0.0


def run_ordered(job: Callable[[int], R], count: int, workers: int) -> List[R]:
    """Run ``job(0..count-1)`` on a thread pool; results in index order."""
    if workers <= 1 or count <= 1:
        return [job(index) for index in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(count)))


def _check_out(out: Path) -> None:
    if out.exists() and not out.is_dir():
        raise ConfigError(f"Output path {out} exists and is not a directory")


def _write_labels(gts: GroundTruthSet, directory: Path, config: RunConfig) -> None:
    if config.writes_coco:
        write_coco(gts, directory / COCO_FILE)
    if config.writes_yolo:
        write_yolo(gts, directory / "yolo")


def _bursts_dir(config: RunConfig, out: Path) -> Path:
    return Path(config.bursts_dir) if config.bursts_dir else out / "bursts"


def _list_bursts(bursts: Path) -> List[Path]:
    if not bursts.is_dir():
        raise ImageIOError(f"Burst directory not found: {bursts}", str(bursts))
    found = sorted(p for p in bursts.iterdir() if p.is_dir() and p.name.startswith("capture_"))
    if not found:
        raise DataValidationError(f"No capture directories under {bursts}", {"bursts": str(bursts)})
    return found


def _load_tracks(directory: Path, model: ReadoutModel) -> Capture:
    data = read_json(directory / TRACKS_FILE)
    try:
        image = (int(data["width"]), int(data["height"]))
        tracks = [Track.from_dict(t) for t in data["tracks"]]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise DataValidationError(
            f"Burst '{directory.name}': malformed {TRACKS_FILE} ({e})", {"burst": str(directory)}
        ) from e
    except ValidationError as e:
        raise DataValidationError(
            f"Burst '{directory.name}': {e.message}", {"burst": str(directory)}
        ) from e

    if image[1] != model.sensor_rows:
        raise DataValidationError(
            f"Burst '{directory.name}': height {image[1]} does not match sensor_rows {model.sensor_rows}",
            {"burst": str(directory)},
        )
    short = [t.actor_id for t in tracks if len(t) < model.frames_per_capture]
    if short:
        raise DataValidationError(
            f"Burst '{directory.name}': tracks of actors {short} are shorter than "
            f"frames_per_capture {model.frames_per_capture}",
            {"burst": str(directory)},
        )
    return directory.name, image, tracks


def _check_burst_frames(directory: Path, model: ReadoutModel) -> None:
    meta = read_sequence_metadata(directory)
    if meta["frame_count"] < model.frames_per_capture:
        raise DataValidationError(
            f"Burst '{directory.name}' has {meta['frame_count']} frames, "
            f"readout needs {model.frames_per_capture}",
            {"burst": str(directory)},
        )
    if meta["height"] != model.sensor_rows:
        raise DataValidationError(
            f"Burst '{directory.name}': height {meta['height']} does not match "
            f"sensor_rows {model.sensor_rows}",
            {"burst": str(directory)},
        )


def _gt_pair(
    captures: Sequence[Capture],
    model: ReadoutModel,
    policy: str,
) -> Tuple[GroundTruthSet, GroundTruthSet]:
    gs = merge_ground_truth([transform_gt_gs(tracks, model, image, cid) for cid, image, tracks in captures])
    rs = merge_ground_truth(
        [transform_gt_rs(tracks, model, image, cid, policy) for cid, image, tracks in captures]
    )
    return gs, rs


# ============================================================================
# COMMANDS
# ============================================================================


def cmd_synth(config: RunConfig, out: PathLike) -> GroundTruthSet:
    """
    Render GS bursts with per-frame tracks and GS ground truth.

    Writes ``bursts/capture_NNNNNN/`` (frames, ``sequence.json``,
    ``tracks.json``), ``labels/gs/``, ``splits.json`` and ``run_config.json``.

    Returns:
        GS ground truth over all captures
    """
    out = Path(out)
    _check_out(out)
    workers = config.resolve_workers()
    model = config.readout

    def job(index: int) -> GroundTruthSet:
        scene, start = capture_scene(config, index)
        cid = capture_id(index)
        directory = out / "bursts" / cid
        frames = (render_frame(scene, t) for t in burst_times(model, start))
        save_frames(frames, directory, model.source_frame_rate)

        tracks = gt_tracks(scene, model, start)
        write_json(
            directory / TRACKS_FILE,
            {
                "image_id": cid,
                "width": scene.width,
                "height": scene.height,
                "start_time": start,
                "readout": model.to_dict(),
                "tracks": [track.to_dict() for track in tracks],
            },
        )
        return transform_gt_gs(tracks, model, scene.size, cid)

    gts = merge_ground_truth(run_ordered(job, config.captures, workers))
    _write_labels(gts, out / "labels" / "gs", config)
    write_split_manifest(gts.image_ids(), out / SPLITS_FILE, config.splits, config.effective_seed or 0)
    write_json(out / RUN_CONFIG_ECHO, config.to_dict())
    logger.info(f"Synthesized {config.captures} capture(s) into {out}")
    return gts


def cmd_roll(config: RunConfig, out: PathLike) -> Tuple[GroundTruthSet, GroundTruthSet]:
    """
    Compose GS/RS image pairs from stored bursts and write both label sets.

    Every burst is checked (frames present, height, tracks) before any
    output is written.

    Returns:
        (GS ground truth, RS ground truth)
    """
    out = Path(out)
    _check_out(out)
    workers = config.resolve_workers()
    model = config.readout

    bursts = _list_bursts(_bursts_dir(config, out))
    for directory in bursts:
        _check_burst_frames(directory, model)
    captures = [_load_tracks(directory, model) for directory in bursts]

    def job(index: int) -> None:
        directory = bursts[index]
        cid = directory.name
        rs = compose_rs_streaming(lambda k: load_image(frame_path(directory, k)), model)
        gs = load_image(frame_path(directory, 0))
        save_image(gs, out / "images" / "gs" / f"{cid}.png")
        save_image(rs, out / "images" / "rs" / f"{cid}.png")

    run_ordered(job, len(bursts), workers)
    gs_gts, rs_gts = _gt_pair(captures, model, config.fragment_policy)
    _write_labels(gs_gts, out / "labels" / "gs", config)
    _write_labels(rs_gts, out / "labels" / "rs", config)
    logger.info(f"Composed {len(bursts)} GS/RS pair(s) into {out}")
    return gs_gts, rs_gts


def cmd_annotate(config: RunConfig, out: PathLike) -> Tuple[GroundTruthSet, GroundTruthSet]:
    """
    GS and RS labels from stored tracks only (no image composition).

    Returns:
        (GS ground truth, RS ground truth)
    """
    out = Path(out)
    _check_out(out)
    model = config.readout
    captures = [_load_tracks(directory, model) for directory in _list_bursts(_bursts_dir(config, out))]

    gs_gts, rs_gts = _gt_pair(captures, model, config.fragment_policy)
    _write_labels(gs_gts, out / "labels" / "gs", config)
    _write_labels(rs_gts, out / "labels" / "rs", config)
    logger.info(f"Annotated {len(captures)} capture(s) into {out}")
    return gs_gts, rs_gts


def load_ground_truth(path: PathLike) -> GroundTruthSet:
    """
    Read GT from a COCO file or a label directory.

    A directory may hold ``coco.json``, YOLO files with ``images.json``, or a
    ``yolo/`` subdirectory; COCO wins when several are present.

    Raises:
        ImageIOError: If no labels are found
    """
    path = Path(path)
    if path.is_file():
        return read_coco(path)
    if (path / COCO_FILE).is_file():
        return read_coco(path / COCO_FILE)
    if (path / YOLO_SIDECAR).is_file():
        return read_yolo(path)
    if (path / "yolo" / YOLO_SIDECAR).is_file():
        return read_yolo(path / "yolo")
    raise ImageIOError(f"No COCO or YOLO labels found at {path}", str(path))


def cmd_eval(
    detections: PathLike,
    gt: PathLike,
    out: PathLike,
    metrics: Optional[MetricConfig] = None,
    label: Optional[str] = None,
) -> EvalReport:
    """
    Evaluate a detection file against a GT directory.

    Writes ``report.json`` and ``report.txt`` under ``out``.
    """
    out = Path(out)
    _check_out(out)
    gts = load_ground_truth(gt)
    dets = read_detections(detections, gts)
    label = label if label is not None else Path(detections).stem
    report = evaluate(dets, gts, metrics, label=label)

    write_json(out / REPORT_JSON, report.to_dict())
    write_text(out / REPORT_TEXT, report.render_text())
    return report


def load_report(path: PathLike) -> EvalReport:
    """
    Read a report JSON file.

    Raises:
        DataValidationError: If the file is not a valid report
    """
    data = read_json(path)
    if not isinstance(data, dict):
        raise DataValidationError(f"{path}: report must be a JSON object", {"file": str(path)})
    try:
        return EvalReport.from_dict(data)
    except ValidationError as e:
        raise DataValidationError(f"{path}: {e.message}", {"file": str(path)}) from e


def cmd_compare(report_a: PathLike, report_b: PathLike, out: PathLike) -> ReportComparison:
    """Compare two reports; writes ``comparison.json`` and ``comparison.txt``."""
    out = Path(out)
    _check_out(out)
    a = load_report(report_a)
    b = load_report(report_b)
    if not a.label:
        a.label = Path(report_a).parent.name or "a"
    if not b.label:
        b.label = Path(report_b).parent.name or "b"
    comparison = compare_reports(a, b)

    write_json(out / COMPARISON_JSON, comparison.to_dict())
    write_text(out / COMPARISON_TEXT, comparison.render_text())
    return comparison


def speed_dir_name(multiplier: float) -> str:
    """Directory name of one sweep point."""
    return f"speed_{multiplier:g}"


def _sweep_point(config: RunConfig, multiplier: float, out: Path, workers: int) -> Dict[str, EvalReport]:
    model = config.readout
    generator = config.generator.with_overrides(speed_multiplier=multiplier)
    point_dir = out / speed_dir_name(multiplier)

    def job(index: int) -> Capture:
        scene, start = capture_scene(config, index, generator)
        cid = capture_id(index)
        if config.write_images:
            rs = compose_rs_streaming(lambda k: render_frame(scene, start + model.frame_time(k)), model)
            save_image(render_frame(scene, start), point_dir / "images" / "gs" / f"{cid}.png")
            save_image(rs, point_dir / "images" / "rs" / f"{cid}.png")
        return cid, scene.size, gt_tracks(scene, model, start)

    captures = run_ordered(job, config.captures, workers)
    gs_gts, rs_gts = _gt_pair(captures, model, config.fragment_policy)
    tag = f"{multiplier:g}x"
    reports = {
        "gs_on_rs": evaluate(ground_truth_as_detections(gs_gts), rs_gts, config.metrics, f"gs_on_rs@{tag}"),
        "rs_on_gs": evaluate(ground_truth_as_detections(rs_gts), gs_gts, config.metrics, f"rs_on_gs@{tag}"),
    }
    for direction, report in reports.items():
        write_json(point_dir / f"report_{direction}.json", report.to_dict())
    return reports


def render_sweep_summary(rows: Sequence[Tuple[float, Dict[str, EvalReport]]]) -> str:
    """Text table of every sweep point and direction."""
    headers = ["Speed", "Direction"] + [METRIC_HEADERS[n] for n in METRIC_NAMES]
    table_rows = [
        [f"{multiplier:g}x", direction] + [format_metric(report.metric(n)) for n in METRIC_NAMES]
        for multiplier, reports in rows
        for direction, report in reports.items()
    ]
    return render_table(headers, table_rows)


def cmd_sweep(config: RunConfig, out: PathLike) -> Dict[str, Any]:
    """
    Speed sweep with the GS ground truth replayed as a detector.

    For each multiplier the same seeded crowds are generated at that speed;
    GS GT at confidence 1.0 is evaluated against RS GT (``gs_on_rs``) and the
    reverse (``rs_on_gs``).

    Returns:
        The summary written to ``sweep_summary.json``

    Raises:
        ConfigError: If the config has no generator or repeats a multiplier
    """
    out = Path(out)
    _check_out(out)
    if config.generator is None:
        raise ConfigError("sweep requires a 'generator' block")
    names = [speed_dir_name(m) for m in config.speed_multipliers]
    if len(set(names)) != len(names):
        raise ConfigError(f"speed_multipliers must be distinct, got {list(config.speed_multipliers)}")
    workers = config.resolve_workers()

    rows = []
    for multiplier in config.speed_multipliers:
        rows.append((multiplier, _sweep_point(config, multiplier, out, workers)))
        logger.info(f"Sweep point {multiplier:g}x done")

    summary = {
        "seed": config.effective_seed,
        "captures": config.captures,
        "points": [
            {
                "speed_multiplier": multiplier,
                **{
                    direction: {name: report.metric(name) for name in METRIC_NAMES}
                    for direction, report in reports.items()
                },
            }
            for multiplier, reports in rows
        ],
    }
    write_json(out / SWEEP_SUMMARY_JSON, summary)
    write_text(out / SWEEP_SUMMARY_TEXT, render_sweep_summary(rows))
    write_json(out / RUN_CONFIG_ECHO, config.to_dict())
    return summary
