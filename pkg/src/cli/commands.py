"""Command handlers. Each returns a process exit code."""

from typing import Any, Callable, Dict, List

import numpy as np
import structlog

from src import __version__
from src.distance.diagnostics import (
    density_at_zero,
    gamma_psi,
    gamma_psi_limits,
    relative_deviation,
)
from src.distance.transform import to_signed_distance
from src.estimator.rd import EstimatorOptions, estimate_rd
from src.estimator.sweep import sweep_boundary
from src.exceptions import (
    ConfigurationError,
    EstimationError,
    GeometryError,
    InputError,
    InsufficientLocalDataError,
    KernelError,
    MalformedInputError,
    MultivariateRDError,
)
from src.geometry.frames import ORIGIN_FRAME, BoundaryFrame
from src.geometry.regions import RegionSpec, boundary_points
from src.kernels.families import KernelFamily, KernelSpec
from src.simulation.designs import (
    DESIGN_IDS,
    export_design_table,
    make_design,
)
from src.simulation.harness import run_mc
from src.simulation.sampling import sample_half_rectangle
from src.utils.constants import EXIT_ESTIMATION, EXIT_OK, EXIT_USAGE

from .io import emit, read_dataset
from .run_config import RunConfig

logger = structlog.get_logger()


def _kernel(config: RunConfig) -> KernelSpec:
    try:
        return KernelSpec(KernelFamily(config.kernel))
    except ValueError as e:
        raise KernelError(f"unknown kernel family {config.kernel!r}") from e


def _options(config: RunConfig) -> EstimatorOptions:
    return EstimatorOptions(
        mode=config.bandwidth_mode,
        alpha=config.alpha,
        density_factor=config.density_factor,
        h6_constant=config.h6_constant,
        fixed_bandwidths=config.fixed_bandwidths,
    )


def _header(config: RunConfig) -> Dict[str, Any]:
    return {"command": config.command, "version": __version__}


def cmd_estimate(config: RunConfig) -> int:
    """Estimate theta at one boundary point."""
    region = RegionSpec.parse(config.region) if config.region else None
    assert config.input is not None
    data = read_dataset(config.input, region)
    frame = BoundaryFrame.from_normal(config.center, config.normal)
    estimate = estimate_rd(data, frame, _kernel(config), _options(config))
    record = estimate.to_dict()
    record["ciLength"] = estimate.ci_length
    emit(
        {**_header(config), "records": [record]},
        config.format,
        config.output,
    )
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    """Estimate theta at equally spaced points along the region boundary."""
    assert config.input is not None and config.region is not None
    region = RegionSpec.parse(config.region)
    data = read_dataset(config.input, region)
    frames = boundary_points(region, config.points, config.extent)
    points = sweep_boundary(
        data, frames, _kernel(config), _options(config), jobs=config.jobs
    )
    emit(
        {
            **_header(config),
            "region": config.region,
            "records": [p.to_dict() for p in points],
        },
        config.format,
        config.output,
    )
    return EXIT_OK if any(p.ok for p in points) else EXIT_ESTIMATION


def cmd_simulate(config: RunConfig) -> int:
    """Monte Carlo summary rows, one per estimator."""
    assert config.design is not None and config.seed is not None
    design = make_design(config.design, config.support, config.noise_std)
    result = run_mc(
        design,
        config.estimators,
        config.sample_size,
        config.reps,
        config.seed,
        spec=_kernel(config),
        options=_options(config),
        jobs=config.jobs,
        binary=config.binary,
    )
    if config.per_rep is not None:
        result.replications_frame().to_csv(
            config.per_rep, index=False, lineterminator="\n"
        )
    records = [result.summary[name].to_dict() for name in result.estimators]
    emit(
        {
            **_header(config),
            "design": design.to_dict(),
            "n": result.n,
            "reps": result.reps,
            "seed": result.seedBase,
            "records": records,
        },
        config.format,
        config.output,
    )
    return EXIT_OK


def _density_series(config: RunConfig) -> List[Dict[str, Any]]:
    assert config.seed is not None
    data = sample_half_rectangle(config.sample_size, config.seed, config.sigma)
    distances = to_signed_distance(data, ORIGIN_FRAME)
    rows = []
    for h in config.h_grid:
        value = density_at_zero(distances, h)
        rows.append(
            {
                "h": h,
                "fcheck": value,
                "fcheck_over_h": value / h,
                "limit_over_h": np.pi / 6.0,
            }
        )
    return rows


def _gamma_series(config: RunConfig) -> List[Dict[str, Any]]:
    assert config.seed is not None
    sigma2 = config.sigma**2
    c_gamma, c_psi, v_limit = gamma_psi_limits(sigma2)
    rows = []
    for rep, n in enumerate(config.n_grid):
        data = sample_half_rectangle(n, config.seed, config.sigma, rep=rep)
        h = float(n**-0.2)
        gp = gamma_psi(to_signed_distance(data, ORIGIN_FRAME), h, sigma2)
        rows.append(
            {
                "n": n,
                "h": h,
                "gamma_deviation": relative_deviation(gp.gammaPlus / h, c_gamma),
                "psi_deviation": relative_deviation(gp.psiPlus, c_psi),
                "nh2v": n * h**2 * gp.vPlus,
                "nh2v_limit": v_limit,
            }
        )
    return rows


def cmd_diagnose(config: RunConfig) -> int:
    """Diagnostic series for the distance strategy."""
    if config.mode == "density":
        rows = _density_series(config)
    else:
        rows = _gamma_series(config)
    emit(
        {**_header(config), "mode": config.mode, "records": rows},
        config.format,
        config.output,
    )
    return EXIT_OK


def cmd_designs(config: RunConfig) -> int:
    """List the simulation designs; optionally export the coefficient table."""
    if config.export is not None:
        export_design_table(config.export)
    records = [make_design(design_id).to_dict() for design_id in DESIGN_IDS]
    emit({**_header(config), "records": records}, config.format, config.output)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "estimate": cmd_estimate,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "diagnose": cmd_diagnose,
    "designs": cmd_designs,
}


def exit_code_for(error: MultivariateRDError) -> int:
    """1 for usage, input, geometry, kernel and configuration errors; 2 otherwise."""
    if isinstance(error, EstimationError):
        return EXIT_ESTIMATION
    if isinstance(error, (InputError, ConfigurationError, GeometryError, KernelError)):
        return EXIT_USAGE
    return EXIT_ESTIMATION


def error_record(error: MultivariateRDError) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "error": type(error).__name__,
        "message": str(error),
        "exitCode": exit_code_for(error),
    }
    if isinstance(error, InsufficientLocalDataError):
        record.update(error.to_dict())
    if isinstance(error, MalformedInputError):
        record["row"] = error.row
        record["column"] = error.column
    return record


def run_command(config: RunConfig) -> int:
    """Dispatch a command, turning package errors into an error record."""
    try:
        return COMMANDS[config.command](config)
    except MultivariateRDError as e:
        code = exit_code_for(e)
        logger.error(
            "Command failed",
            command=config.command,
            error_type=type(e).__name__,
            error=str(e),
            exit_code=code,
        )
        emit(
            {**_header(config), "records": [error_record(e)]},
            config.format,
            config.output,
        )
        return code
