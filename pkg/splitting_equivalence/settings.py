"""Configuration management using pydantic-settings."""

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import ConfigurationError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def normalize_log_level(v: str) -> str:
    """Upper-case a level name, rejecting unknown ones."""
    level = v.strip().upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"Unsupported log level: {v}. Supported: {', '.join(LOG_LEVELS)}")
    return level


class Settings(BaseSettings):
    """Process-wide defaults loaded from environment variables (prefix SPLITEQ_) or .env."""

    model_config = SettingsConfigDict(
        env_prefix="SPLITEQ_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Output Configuration
    output_dir: str = Field(default="./output", description="Directory for CSV/JSON artifacts when --out is absent")
    write_json_report: bool = Field(default=True, description="Also write a JSON summary next to each report CSV")

    # Run defaults
    default_iterations: int = Field(default=100, ge=0, description="Iteration budget when a config omits one")
    default_stop_tol: float = Field(default=0.0, ge=0.0, description="Early-stop residual; 0 disables")

    # Verification tolerances
    verify_abs_tol: float = Field(default=1e-10, gt=0.0, description="Absolute per-iterate tolerance")
    verify_rel_tol: float = Field(default=1e-10, ge=0.0, description="Relative tolerance, scaled by iterate norm")

    log_level: str = Field(default="WARNING", description="Logging level (DEBUG, INFO, WARNING, ERROR)")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize to upper case and reject unknown levels."""
        return normalize_log_level(v)


def load_settings() -> Settings:
    """Load and validate settings.

    Raises:
        ConfigurationError: If an environment value fails validation
    """
    try:
        return Settings()
    except ValidationError as e:
        raise ConfigurationError(
            f"Failed to load settings: {e}\nCheck the SPLITEQ_* variables in your environment or .env file"
        ) from e
