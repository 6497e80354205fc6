"""Per-command run configuration merged from settings, a JSON file and flags."""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

import structlog
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from src.bandwidth.terms import BandwidthMode, DensityFactor, H6Constant
from src.config.settings import Settings
from src.exceptions import (
    InvalidArgumentError,
    InvalidConfigError,
    MissingConfigError,
)
from src.utils.constants import DEFAULT_N, DEFAULT_REPS

logger = structlog.get_logger()

Command = Literal["estimate", "sweep", "simulate", "diagnose", "designs"]

DEFAULT_ESTIMATORS = ["2d-diff", "2d-common", "distance-ik"]
DEFAULT_DENSITY_N = 100_000
DEFAULT_H_GRID = [0.4, 0.2, 0.1, 0.05, 0.025]
DEFAULT_N_GRID = [10_000, 40_000, 160_000]


class RunConfig(BaseModel):
    """Validated options for one CLI command."""

    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    command: Command

    # Data and geometry
    input: Optional[Path] = None
    region: Optional[str] = None
    center: Tuple[float, float] = (0.0, 0.0)
    normal: Tuple[float, float] = (0.0, 1.0)
    points: int = Field(10, ge=1)
    extent: float = Field(1.0, gt=0.0)

    # Estimation
    kernel: str = "product-triangular"
    bandwidth_mode: BandwidthMode = BandwidthMode.HETEROGENEOUS
    density_factor: DensityFactor = DensityFactor.ADJUSTED
    h6_constant: H6Constant = H6Constant.EIGHTH
    h1: Optional[float] = Field(None, gt=0.0)
    h2: Optional[float] = Field(None, gt=0.0)
    alpha: float = 0.05

    # Simulation
    design: Optional[int] = None
    n: Optional[int] = Field(None, ge=1)
    reps: int = Field(DEFAULT_REPS, ge=1)
    seed: Optional[int] = None
    estimators: List[str] = Field(default_factory=lambda: list(DEFAULT_ESTIMATORS))
    support: Optional[Tuple[float, float, float, float]] = None
    noise_std: Optional[float] = Field(None, gt=0.0)
    binary: bool = False
    per_rep: Optional[Path] = None

    # Diagnostics
    mode: Optional[Literal["density", "gamma"]] = None
    h_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_H_GRID))
    n_grid: List[int] = Field(default_factory=lambda: list(DEFAULT_N_GRID))
    sigma: float = Field(1.0, gt=0.0)

    # Designs
    export: Optional[Path] = None

    # Output
    output: Optional[Path] = None
    format: Literal["json", "csv"] = "json"
    jobs: int = 1

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if not 0.0 < v < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        return v

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: int) -> int:
        if v == 0 or v < -1:
            raise ValueError("jobs must be >= 1 or -1 for all cores")
        return v

    @field_validator("h_grid")
    @classmethod
    def validate_h_grid(cls, v: List[float]) -> List[float]:
        if not v or any(h <= 0.0 for h in v):
            raise ValueError("h grid must be non-empty and positive")
        return v

    @field_validator("n_grid")
    @classmethod
    def validate_n_grid(cls, v: List[int]) -> List[int]:
        if not v or any(n < 10 for n in v):
            raise ValueError("n grid must be non-empty with n >= 10")
        return v

    @model_validator(mode="after")
    def validate_command_fields(self) -> "RunConfig":
        """Required fields per command and path accessibility."""
        if self.command in ("estimate", "sweep"):
            if self.input is None:
                raise ValueError(f"{self.command} requires --input")
            if not self.input.is_file() or not os.access(self.input, os.R_OK):
                raise ValueError(f"input file is not readable: {self.input}")
            if self.command == "sweep" and self.region is None:
                raise ValueError("sweep requires --region to place boundary points")
            if self.bandwidth_mode is BandwidthMode.FIXED and (
                self.h1 is None or self.h2 is None
            ):
                raise ValueError("fixed bandwidth mode requires --h1 and --h2")
        if self.command == "simulate":
            if self.design is None:
                raise ValueError("simulate requires --design")
            if self.seed is None:
                raise ValueError("simulate requires --seed")
            if not self.estimators:
                raise ValueError("simulate requires at least one estimator")
        if self.command == "diagnose":
            if self.mode is None:
                raise ValueError("diagnose requires a mode (density or gamma)")
            if self.seed is None:
                raise ValueError("diagnose requires --seed")
        for target in (self.output, self.per_rep, self.export):
            if target is not None and not target.parent.resolve().is_dir():
                raise ValueError(f"output directory does not exist: {target.parent}")
        return self

    @property
    def fixed_bandwidths(self) -> Optional[Tuple[float, float]]:
        if self.h1 is None or self.h2 is None:
            return None
        return (self.h1, self.h2)

    @property
    def sample_size(self) -> int:
        """Explicit n, else the command's default."""
        if self.n is not None:
            return self.n
        return DEFAULT_DENSITY_N if self.command == "diagnose" else DEFAULT_N

    @classmethod
    def from_sources(
        cls,
        args: Mapping[str, Any],
        config_file: Optional[Path] = None,
        settings: Optional[Settings] = None,
    ) -> "RunConfig":
        """Merge settings defaults < JSON config file < explicit flags.

        ``args`` values of None mean "not given on the command line".
        """
        values: Dict[str, Any] = {}
        if settings is not None:
            values.update(
                {
                    "kernel": settings.kernel.value,
                    "bandwidth_mode": settings.bandwidth_mode,
                    "density_factor": settings.density_factor,
                    "h6_constant": settings.h6_constant,
                    "alpha": settings.alpha,
                    "format": settings.output_format,
                    "jobs": settings.jobs,
                    "support": settings.support_bounds,
                    "noise_std": settings.noise_std,
                }
            )
        if config_file is not None:
            values.update(_read_config_file(config_file))
        values.update({k: v for k, v in args.items() if v is not None})

        try:
            config = cls(**values)
        except ValidationError as e:
            raise InvalidArgumentError(_format_validation_error(e)) from e
        logger.debug("Run configuration ready", command=config.command)
        return config


def _read_config_file(path: Path) -> Dict[str, Any]:
    """JSON object whose keys mirror the long flag names."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise MissingConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InvalidConfigError(f"config file is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InvalidConfigError("config file must contain a JSON object")
    return {str(k).replace("-", "_"): v for k, v in raw.items()}


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item.get("loc", ())) or "config"
        parts.append(f"{where}: {item.get('msg')}")
    return "; ".join(parts)
