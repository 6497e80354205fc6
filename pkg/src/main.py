"""Main entry point for the multivariate RD command-line tool."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence

import structlog

from src import __version__
from src.bandwidth.terms import BandwidthMode, DensityFactor, H6Constant
from src.cli.commands import error_record, exit_code_for, run_command
from src.cli.io import emit
from src.cli.run_config import RunConfig
from src.config import load_config
from src.exceptions import MultivariateRDError
from src.kernels.families import KernelFamily
from src.utils.constants import APP_DESCRIPTION, APP_NAME, EXIT_USAGE


def setup_logging(debug: bool = False, level: Optional[str] = None) -> None:
    """Configure structured logging.

    Routes ALL log output (structlog and stdlib) through the same
    processor chain to stderr, leaving stdout for results:
    JSON by default, coloured console in debug.
    """
    log_level = logging.DEBUG if debug else getattr(logging, level or "INFO")

    shared_processors: list[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    renderer: Any = (
        structlog.dev.ConsoleRenderer()
        if debug
        else structlog.processors.JSONRenderer()
    )

    structlog.configure(
        processors=[
            *shared_processors,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processors=[
                structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                renderer,
            ],
            foreign_pre_chain=shared_processors,
        )
    )

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(log_level)

    logging.getLogger("joblib").setLevel(logging.WARNING)


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage-error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected numbers: {text}") from e


def _ints(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected integers: {text}") from e


def _pair(text: str) -> List[float]:
    values = _floats(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two numbers x,y: {text}")
    return values


def _names(text: str) -> List[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _add_estimation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kernel", choices=[k.value for k in KernelFamily], help="Kernel family"
    )
    parser.add_argument(
        "--bandwidth-mode",
        choices=[m.value for m in BandwidthMode],
        help="Bandwidth selection mode",
    )
    parser.add_argument(
        "--density-factor",
        choices=[d.value for d in DensityFactor],
        help="Scale the variance constant by the estimated density at c",
    )
    parser.add_argument(
        "--h6-constant",
        choices=[c.value for c in H6Constant],
        help="Constant in the closed-form bandwidth",
    )
    parser.add_argument("--alpha", type=float, help="1 - confidence level")


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=Path, help="CSV with y, r1, r2 [, d]")
    parser.add_argument(
        "--region", help="Treatment region, e.g. intersection:0,0 or half-plane"
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation.

    Every option defaults to None so that config-file values survive unless
    the flag is given explicitly.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--debug", action="store_true", default=None, help="Enable debug logging"
    )
    common.add_argument("--config-file", type=Path, help="JSON file mirroring flags")
    common.add_argument("--env-file", type=Path, help="dotenv file with MRD_* values")
    common.add_argument("--jobs", type=int, help="Parallel workers (default MRD_JOBS)")
    common.add_argument("--format", choices=["json", "csv"], help="Output format")
    common.add_argument("--output", type=Path, help="Output file (default stdout)")

    parser = UsageErrorParser(
        prog="mrd",
        description=APP_DESCRIPTION,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version", action="version", version=f"{APP_NAME} {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    estimate = sub.add_parser("estimate", parents=[common], help="Estimate at c")
    _add_data_flags(estimate)
    _add_estimation_flags(estimate)
    estimate.add_argument("--center", type=_pair, help="Boundary point c as x,y")
    estimate.add_argument("--normal", type=_pair, help="Normal into treatment as x,y")
    estimate.add_argument("--h1", type=float, help="Fixed tangent bandwidth")
    estimate.add_argument("--h2", type=float, help="Fixed normal bandwidth")

    sweep = sub.add_parser("sweep", parents=[common], help="Estimate along a boundary")
    _add_data_flags(sweep)
    _add_estimation_flags(sweep)
    sweep.add_argument("--points", type=int, help="Points per boundary piece")
    sweep.add_argument("--extent", type=float, help="Reach of the sweep from c")
    sweep.add_argument("--h1", type=float, help="Fixed tangent bandwidth")
    sweep.add_argument("--h2", type=float, help="Fixed normal bandwidth")

    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo run")
    _add_estimation_flags(simulate)
    simulate.add_argument("--design", type=int, help="Design id 1-4")
    simulate.add_argument("--n", type=int, help="Sample size per replication")
    simulate.add_argument("--reps", type=int, help="Replications")
    simulate.add_argument("--seed", type=int, help="Base seed (required)")
    simulate.add_argument("--estimators", type=_names, help="Comma-separated names")
    simulate.add_argument("--support", type=_floats, help="x_lo,x_hi,y_lo,y_hi")
    simulate.add_argument("--noise-std", type=float, help="Noise standard deviation")
    simulate.add_argument(
        "--binary", action="store_true", default=None, help="Bernoulli outcomes"
    )
    simulate.add_argument("--per-rep", type=Path, help="CSV of per-replication rows")

    diagnose = sub.add_parser(
        "diagnose", parents=[common], help="Distance diagnostics"
    )
    diagnose.add_argument("mode", choices=["density", "gamma"], help="Diagnostic")
    diagnose.add_argument("--seed", type=int, help="Seed (required)")
    diagnose.add_argument("--n", type=int, help="Sample size for density mode")
    diagnose.add_argument("--h-grid", type=_floats, help="Bandwidths for density mode")
    diagnose.add_argument("--n-grid", type=_ints, help="Sample sizes for gamma mode")
    diagnose.add_argument("--sigma", type=float, help="Noise standard deviation")

    designs = sub.add_parser("designs", parents=[common], help="List designs")
    designs.add_argument("--export", type=Path, help="Write coefficient table CSV")

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def _flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"debug", "config_file", "env_file"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point."""
    args = parse_args(argv)
    setup_logging(debug=bool(args.debug))
    logger = structlog.get_logger()

    try:
        settings = load_config(config_file=args.env_file)
        if settings.debug or settings.log_level != "INFO":
            setup_logging(
                debug=bool(args.debug) or settings.debug, level=settings.log_level
            )
        config = RunConfig.from_sources(_flag_values(args), args.config_file, settings)
    except MultivariateRDError as e:
        logger.error("Invalid configuration", error=str(e))
        emit({"command": args.command, "records": [error_record(e)]}, "json", None)
        return exit_code_for(e)

    logger.info("Starting command", command=config.command, version=__version__)
    return run_command(config)


def run() -> None:
    """Synchronous entry point for setuptools."""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.stderr.write("\nInterrupted\n")
        sys.exit(130)


if __name__ == "__main__":
    run()
