"""Command-line front end."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from rollscan.common.exceptions import (
    AnnotationFormatError,
    ConfigError,
    CorruptImageError,
    ImageIOError,
    NotFoundError,
    RollscanError,
    UnsupportedFormatError,
    ValidationError,
)
from rollscan.common.log_config import configure_logging
from rollscan.constants import (
    APP_DESCRIPTION,
    APP_NAME,
    APP_VERSION,
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
    LABEL_FORMATS,
    SWEEP_SUMMARY_TEXT,
)
from rollscan.models.run_config import RunConfig
from rollscan.services import pipeline_service

logger = logging.getLogger(__name__)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="Run config JSON")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--seed", type=int, help="Override the config seed")
    parser.add_argument("--workers", type=int, help="Capture worker threads")
    parser.add_argument("--format", choices=LABEL_FORMATS, help="Label format(s) to write")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per pipeline step."""
    parser = argparse.ArgumentParser(prog=APP_NAME, description=APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("synth", "Render GS bursts and GS ground truth"),
        ("roll", "Compose GS/RS image pairs and labels from bursts"),
        ("annotate", "Derive GS/RS labels from stored tracks"),
        ("sweep", "Speed sweep with GS ground truth replayed as detections"),
    ):
        _add_run_flags(sub.add_parser(name, help=text))

    eval_parser = sub.add_parser("eval", help="Evaluate detections against ground truth")
    eval_parser.add_argument("--detections", required=True, help="COCO results JSON or YOLO detection directory")
    eval_parser.add_argument("--gt", required=True, help="COCO file or label directory")
    eval_parser.add_argument("--out", required=True, help="Output directory")
    eval_parser.add_argument("--config", help="Run config whose metrics block is used")
    eval_parser.add_argument("--label", help="Dataset label shown in the report")

    compare_parser = sub.add_parser("compare", help="Compare two evaluation reports")
    compare_parser.add_argument("report_a", help="First report.json")
    compare_parser.add_argument("report_b", help="Second report.json")
    compare_parser.add_argument("--out", required=True, help="Output directory")
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    return pipeline_service.load_run_config(
        args.config,
        seed=args.seed,
        workers=args.workers,
        format=args.format,
    )


def _run_synth(args: argparse.Namespace) -> None:
    gts = pipeline_service.cmd_synth(_load_config(args), args.out)
    print(f"synthesized {len(gts)} capture(s), {gts.count()} GS boxes -> {args.out}")


def _run_roll(args: argparse.Namespace) -> None:
    gs_gts, rs_gts = pipeline_service.cmd_roll(_load_config(args), args.out)
    print(f"composed {len(gs_gts)} pair(s): {gs_gts.count()} GS boxes, {rs_gts.count()} RS boxes -> {args.out}")


def _run_annotate(args: argparse.Namespace) -> None:
    gs_gts, rs_gts = pipeline_service.cmd_annotate(_load_config(args), args.out)
    print(f"annotated {len(gs_gts)} capture(s): {gs_gts.count()} GS boxes, {rs_gts.count()} RS boxes -> {args.out}")


def _run_eval(args: argparse.Namespace) -> None:
    metrics = pipeline_service.load_run_config(args.config).metrics if args.config else None
    report = pipeline_service.cmd_eval(args.detections, args.gt, args.out, metrics, args.label)
    print(report.render_text(), end="")


def _run_compare(args: argparse.Namespace) -> None:
    comparison = pipeline_service.cmd_compare(args.report_a, args.report_b, args.out)
    print(comparison.render_text(), end="")


def _run_sweep(args: argparse.Namespace) -> None:
    config = _load_config(args)
    pipeline_service.cmd_sweep(config, args.out)
    print((Path(args.out) / SWEEP_SUMMARY_TEXT).read_text(encoding="utf-8"), end="")


COMMANDS: Dict[str, Callable[[argparse.Namespace], None]] = {
    "synth": _run_synth,
    "roll": _run_roll,
    "annotate": _run_annotate,
    "eval": _run_eval,
    "compare": _run_compare,
    "sweep": _run_sweep,
}


def exit_code_for(error: RollscanError) -> int:
    """Map an error to the process exit code."""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG_ERROR
    if isinstance(error, ImageIOError):
        return EXIT_IO_ERROR
    if isinstance(
        error,
        (ValidationError, NotFoundError, UnsupportedFormatError, CorruptImageError, AnnotationFormatError),
    ):
        return EXIT_DATA_ERROR
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI.

    Returns:
        0 on success, 2 on config errors, 3 on data errors, 4 on I/O errors
    """
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        COMMANDS[args.command](args)
    except RollscanError as e:
        logger.debug(f"{args.command} failed: {e.to_dict()}")
        print(f"{APP_NAME} {args.command}: error: {e.message}", file=sys.stderr)
        return exit_code_for(e)
    except OSError as e:
        print(f"{APP_NAME} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
