# /eh-feedback-access/app/core/config.py

"""
Runtime settings for the application, read from the environment (prefix `EHCR_`)
and an optional `.env` file in the working directory.

These settings control how the tool runs (logging, concurrency, output
formatting). The model itself is configured through the flat key-value files
handled by `app.services.config_service`.
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="EHCR_", env_file=".env", extra="ignore")

    log_level: str = Field(default="INFO")
    log_to_file: bool = Field(default=False)
    log_dir: str = Field(default="logs")
    # Upper bound on sweep points optimized at the same time.
    max_workers: int = Field(default=4, ge=1)
    csv_significant_digits: int = Field(default=12, ge=1, le=17)


@lru_cache
def get_settings() -> AppSettings:
    """Get the process-wide settings instance."""
    return AppSettings()
