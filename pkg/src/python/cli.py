#!/usr/bin/env python3
"""
Pan-sharpening command-line front end

    fuse        fuse a PAN band with an MS image, optionally assess against a reference
    metrics     assess a fused image against a reference
    experiment  degrade a reference, run every method and compare them
"""

import argparse
import logging
import sys
from typing import List, Optional

import structlog
from pydantic import ValidationError

from src.python.errors import EXIT_OK, EXIT_USAGE, PansharpError
from src.python.main import cmd_experiment, cmd_fuse, cmd_metrics
from src.python.models.models import (
    DEFAULT_FACTOR,
    ExperimentSpec,
    FusionMethod,
    ReportFormat,
    RunConfig,
)
from src.python.utils.filters import DEFAULT_BOOST, DEFAULT_KERNEL_SIZE
from src.python.utils.wavelet import DEFAULT_LEVELS

logger = structlog.get_logger(__file__)

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def configure_logging(level: str = "info", json_logs: bool = False) -> None:
    """Route structlog output to stderr so stdout stays free"""
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(LOG_LEVELS[level]),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _add_fusion_parameters(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kernel", type=int, default=DEFAULT_KERNEL_SIZE, help=f"Odd filter size n >= 3 (default: {DEFAULT_KERNEL_SIZE})"
    )
    parser.add_argument(
        "--levels", type=int, default=DEFAULT_LEVELS, help=f"Wavelet decomposition levels (default: {DEFAULT_LEVELS})"
    )
    parser.add_argument(
        "--boost", type=float, default=DEFAULT_BOOST, help=f"High-boost factor for HFA (default: {DEFAULT_BOOST})"
    )
    parser.add_argument("--hpf-unnormalized", action="store_true", help="Use the high-pass kernel without 1/n^2")
    parser.add_argument("--metrics-on-quantized", action="store_true", help="Compute all indices on 8-bit data")


def _add_report_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        dest="report_format",
        default=ReportFormat.JSON.value,
        choices=[f.value for f in ReportFormat],
        help="Report format (default: json)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Pan-sharpening image fusion toolkit")
    parser.add_argument("--log-level", default="info", choices=list(LOG_LEVELS), help="Log level")
    parser.add_argument("--json-logs", action="store_true", help="Emit logs as JSON lines")
    commands = parser.add_subparsers(dest="command", required=True)

    fuse = commands.add_parser("fuse", help="Fuse a PAN band with an MS image")
    fuse.add_argument("--method", required=True, choices=[m.value for m in FusionMethod], help="Fusion method")
    fuse.add_argument("--pan", required=True, help="Panchromatic PGM file")
    fuse.add_argument("--ms", required=True, help="Multispectral PGM/PPM file")
    fuse.add_argument("--out", required=True, help="Output image file")
    fuse.add_argument("--pan-bits", type=int, default=8, help="Bit depth of the PAN samples (default: 8)")
    fuse.add_argument("--plain", action="store_true", help="Write plain (ASCII) P2/P3 output")
    fuse.add_argument("--reference", help="Reference image to assess the result against")
    fuse.add_argument("--report", help="Report file (requires --reference)")
    _add_fusion_parameters(fuse)
    _add_report_format(fuse)

    metrics = commands.add_parser("metrics", help="Assess a fused image against a reference")
    metrics.add_argument("--fused", required=True, help="Fused image file")
    metrics.add_argument("--reference", required=True, help="Reference image file")
    metrics.add_argument("--report", required=True, help="Report file")
    metrics.add_argument("--label", default="FUSED", help="Method label in the report (default: FUSED)")
    metrics.add_argument("--metrics-on-quantized", action="store_true", help="Compute all indices on 8-bit data")
    _add_report_format(metrics)

    experiment = commands.add_parser("experiment", help="Compare all methods on a degraded reference")
    experiment.add_argument("--reference", required=True, help="3-band reference PPM file")
    experiment.add_argument("--report", required=True, help="Report file")
    experiment.add_argument(
        "--factor", type=int, default=DEFAULT_FACTOR, help=f"Downsample factor (default: {DEFAULT_FACTOR})"
    )
    experiment.add_argument(
        "--method",
        dest="methods",
        action="append",
        choices=[m.value for m in FusionMethod],
        help="Method to include (repeatable; default: all)",
    )
    experiment.add_argument("--workers", type=int, default=1, help="Threads used to run methods (default: 1)")
    experiment.add_argument("--ranking", help="Write per-index method ranking CSV here")
    experiment.add_argument("--seed", type=int, help="Seed for the synthetic PAN noise")
    experiment.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma added to the PAN")
    _add_fusion_parameters(experiment)
    _add_report_format(experiment)
    return parser


def _fusion_parameters(args: argparse.Namespace) -> dict:
    return {
        "kernel_size": args.kernel,
        "levels": args.levels,
        "boost": args.boost,
        "hpf_normalized": not args.hpf_unnormalized,
        "metrics_on_quantized": args.metrics_on_quantized,
    }


def run_command(args: argparse.Namespace) -> None:
    if args.command == "fuse":
        config = RunConfig(
            method=args.method,
            pan_path=args.pan,
            ms_path=args.ms,
            out_path=args.out,
            pan_bits=args.pan_bits,
            plain=args.plain,
            reference_path=args.reference,
            report_path=args.report,
            report_format=args.report_format,
            **_fusion_parameters(args),
        )
        cmd_fuse(config)
    elif args.command == "metrics":
        cmd_metrics(
            args.fused,
            args.reference,
            args.report,
            report_format=ReportFormat(args.report_format),
            label=args.label,
            quantized=args.metrics_on_quantized,
        )
    elif args.command == "experiment":
        options = {"methods": args.methods} if args.methods else {}
        spec = ExperimentSpec(
            reference_path=args.reference,
            report_path=args.report,
            factor=args.factor,
            report_format=args.report_format,
            ranking_path=args.ranking,
            workers=args.workers,
            seed=args.seed,
            noise=args.noise,
            **options,
            **_fusion_parameters(args),
        )
        cmd_experiment(spec)


def _describe_validation(error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        field = ".".join(str(part) for part in item["loc"]) or "arguments"
        problems.append(f"{field}: {item['msg']}")
    return "; ".join(problems)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.json_logs)
    logger.info("Starting pansharp", command=args.command)

    try:
        run_command(args)
    except ValidationError as e:
        detail = _describe_validation(e)
        logger.error("Invalid arguments", error=detail)
        print(f"error: invalid arguments: {detail}", file=sys.stderr)
        return EXIT_USAGE
    except PansharpError as e:
        logger.error("Command failed", command=args.command, error=e.detail, exit_code=e.exit_code)
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code

    logger.info("Command completed", command=args.command)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
