"""Configuration loading with environment detection."""

import os
from pathlib import Path
from typing import Any, Dict, Optional, Set

import structlog
from dotenv import load_dotenv
from pydantic import ValidationError

from src.exceptions import ConfigurationError, MissingConfigError

from .environments import DevelopmentConfig, ProductionConfig, TestingConfig
from .settings import Settings

logger = structlog.get_logger()

_ENVIRONMENTS = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}


def load_config(
    env: Optional[str] = None, config_file: Optional[Path] = None
) -> Settings:
    """Load configuration based on environment.

    Args:
        env: Environment name (development, testing, production)
        config_file: Optional path to a dotenv file

    Returns:
        Configured Settings instance

    Raises:
        ConfigurationError: If configuration is invalid
    """
    env_file = config_file or Path(".env")
    if env_file.exists():
        logger.debug("Loading .env file", path=str(env_file))
        load_dotenv(env_file)
    elif config_file is not None:
        raise MissingConfigError(f"dotenv file not found: {config_file}")

    env = env or os.getenv("MRD_ENVIRONMENT", "production")
    logger.debug("Loading configuration", environment=env)

    try:
        settings = Settings()
        settings = _apply_environment_overrides(settings, env)
        _validate_config(settings)
    except (ValidationError, ValueError) as e:
        logger.error("Failed to load configuration", error=str(e), environment=env)
        raise ConfigurationError(f"Configuration loading failed: {e}") from e

    logger.debug(
        "Configuration loaded",
        environment=env,
        jobs=settings.jobs,
        kernel=settings.kernel.value,
        bandwidth_mode=settings.bandwidth_mode.value,
    )
    return settings


def _apply_environment_overrides(settings: Settings, env: Optional[str]) -> Settings:
    """Apply environment-specific configuration overrides."""
    klass = _ENVIRONMENTS.get(env or "")
    if klass is None:
        logger.warning("Unknown environment, using default settings", environment=env)
        return settings

    overrides: Dict[str, Any] = {
        key: value
        for key, value in klass.as_dict().items()
        if key in Settings.model_fields and key not in _explicit_env_fields()
    }
    if overrides:
        logger.debug("Applied environment overrides", environment=env, **overrides)
    return settings.model_copy(update=overrides)


def _explicit_env_fields() -> Set[str]:
    """Fields set explicitly through MRD_* variables win over environment defaults."""
    return {
        name
        for name in Settings.model_fields
        if os.getenv(f"MRD_{name.upper()}") is not None
    }


def _validate_config(settings: Settings) -> None:
    """Perform additional runtime validation."""
    cpus = os.cpu_count() or 1
    if settings.jobs > cpus:
        logger.warning("More jobs than CPUs requested", jobs=settings.jobs, cpus=cpus)


def create_test_config(**overrides: Any) -> Settings:
    """Create configuration for testing with optional overrides.

    Args:
        **overrides: Configuration values to override

    Returns:
        Settings instance configured for testing
    """
    test_values = TestingConfig.as_dict()
    test_values.update(overrides)
    return Settings(**test_values)
