# /eh-feedback-access/app/core/exceptions.py

"""
Domain errors raised by the analysis services and the configuration layer.

Infeasibility of an optimization point is never an exception at the public
`evaluate`/`maximize` level; `UnstableQueueError` only travels between the
queueing, throughput and optimizer services.
"""

from typing import Optional


class ModelError(Exception):
    """Base class for every error raised by this package."""


class UnstableQueueError(ModelError):
    """The primary queue has no stationary distribution (lambda_p >= eta)."""

    def __init__(self, lambda_p: float, eta: float):
        self.lambda_p = lambda_p
        self.eta = eta
        super().__init__(f"Primary queue unstable: lambda_p={lambda_p:.12g} >= eta={eta:.12g}")


class ZeroDrainError(ModelError):
    """The energy drained per secondary transmission is zero, so availability is undefined."""

    def __init__(self, mode: str, drain: float):
        self.mode = mode
        self.drain = drain
        super().__init__(f"Zero energy drain per transmission in {mode} mode (drain={drain})")


class ConfigError(ModelError):
    """A configuration file could not be parsed or failed validation."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = ""
        if line is not None:
            location += f"line {line}: "
        if key is not None:
            location += f"key '{key}': "
        super().__init__(f"{location}{message}")
