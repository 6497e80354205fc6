"""Environment-specific configuration overrides."""

from typing import Any, Dict


class _Overrides:
    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Return config as dictionary."""
        return {
            key: value
            for klass in reversed(cls.__mro__)
            for key, value in vars(klass).items()
            if not key.startswith("_")
            and not callable(value)
            and not isinstance(value, classmethod)
        }


class DevelopmentConfig(_Overrides):
    """Development environment overrides."""

    debug: bool = True
    log_level: str = "DEBUG"


class TestingConfig(_Overrides):
    """Testing environment configuration."""

    debug: bool = True
    jobs: int = 1  # keep tests single-process
    log_level: str = "DEBUG"


class ProductionConfig(_Overrides):
    """Production environment configuration."""

    debug: bool = False
    log_level: str = "INFO"
