# /eh-feedback-access/app/core/logger.py

"""
Centralized logging configuration for the application.
Uses Python's logging module; handlers are installed once by the CLI entry point.
"""

import logging
import sys
from pathlib import Path

from app.core.config import AppSettings

# Configure logging format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def configure_logging(settings: AppSettings) -> None:
    """
    Configure the root logger from the runtime settings.

    Records go to stderr so that stdout stays clean for CSV and report output.
    A file handler is added only when `log_to_file` is enabled.

    Args:
        settings: The runtime settings (level, log directory, file toggle).
    """
    handlers = [logging.StreamHandler(sys.stderr)]

    if settings.log_to_file:
        logs_dir = Path(settings.log_dir)
        logs_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(logs_dir / "app.log", encoding="utf-8"))

    logging.basicConfig(
        level=settings.log_level.upper(),
        format=LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=handlers,
        force=True,
    )


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a module.

    Args:
        name: Usually __name__ of the calling module

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
