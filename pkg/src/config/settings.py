"""Configuration management using Pydantic Settings.

Features:
- Environment variable loading (``MRD_`` prefix)
- Type validation
- Default values for every command
- Computed properties
"""

from typing import Literal, Tuple

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.bandwidth.terms import BandwidthMode, DensityFactor, H6Constant
from src.kernels.families import KernelFamily
from src.utils.constants import DEFAULT_ALPHA, DEFAULT_NOISE_STD, DEFAULT_SUPPORT


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Execution
    jobs: int = Field(1, description="Parallel workers; -1 uses all cores")

    # Estimation defaults
    kernel: KernelFamily = Field(
        KernelFamily.PRODUCT_TRIANGULAR, description="Boundary kernel family"
    )
    bandwidth_mode: BandwidthMode = Field(
        BandwidthMode.HETEROGENEOUS, description="Bandwidth selection mode"
    )
    density_factor: DensityFactor = Field(
        DensityFactor.ADJUSTED,
        description="Divide the variance constant by the density at c",
    )
    h6_constant: H6Constant = Field(
        H6Constant.EIGHTH, description="Constant k in h^6 = k C_v / (n R)"
    )
    alpha: float = Field(DEFAULT_ALPHA, description="Confidence level is 1 - alpha")

    # Output
    output_format: Literal["json", "csv"] = Field("json", description="Output format")

    # Simulation
    support: str = Field(
        ",".join(str(v) for v in DEFAULT_SUPPORT),
        description="Design support rectangle x_lo,x_hi,y_lo,y_hi",
    )
    noise_std: float = Field(DEFAULT_NOISE_STD, description="Design noise std")

    # Monitoring
    log_level: str = Field("INFO", description="Logging level")

    # Development
    debug: bool = Field(False, description="Enable debug mode")

    model_config = SettingsConfigDict(
        env_prefix="MRD_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v: int) -> int:
        """Worker count must be positive or -1."""
        if v == 0 or v < -1:
            raise ValueError("jobs must be >= 1 or -1 for all cores")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if not 0.0 < v < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        return v

    @field_validator("noise_std")
    @classmethod
    def validate_noise_std(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("noise_std must be positive")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return v.upper()

    @model_validator(mode="after")
    def validate_support(self) -> "Settings":
        """Support must parse and contain the origin in its interior."""
        x_lo, x_hi, y_lo, y_hi = self.support_bounds
        if not (x_lo < 0.0 < x_hi and y_lo < 0.0 < y_hi):
            raise ValueError("support must contain the origin in its interior")
        return self

    @property
    def support_bounds(self) -> Tuple[float, float, float, float]:
        """Parse the comma-separated support rectangle."""
        parts = [p.strip() for p in self.support.split(",") if p.strip()]
        if len(parts) != 4:
            raise ValueError("support needs four comma-separated numbers")
        x_lo, x_hi, y_lo, y_hi = (float(p) for p in parts)
        return x_lo, x_hi, y_lo, y_hi

    @property
    def is_production(self) -> bool:
        return not self.debug
