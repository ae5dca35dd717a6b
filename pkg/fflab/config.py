"""Project-wide constants and their environment overrides."""

from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Mapping, Optional

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "FFLAB_"


@dataclass(frozen=True)
class Settings:
    """Immutable bundle of the tunable constants used across the library.

    Attributes:
        guard (int): largest enumeration size any operation may allocate or loop over
        tolerance (float): absolute tolerance for exact identities
        power_tolerance (float): relative convergence tolerance of power iteration
        slack (float): factor applied to every baseline constant
        bisection_tolerance (float): interval width at which bisection stops
        log_slack (float): slack in the exponent allowed for empirical energy scatters
        baseline_dir (Path): directory holding the baseline store
        log_level (str): level the CLI installs on the ``fflab`` logger
    """

    guard: int = 2**31
    tolerance: float = 1e-9
    power_tolerance: float = 1e-6
    slack: float = 2.0
    bisection_tolerance: float = 1e-10
    log_slack: float = 0.2
    baseline_dir: Path = Path("baselines")
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> Settings:
        """Builds settings from defaults overlaid with ``FFLAB_*`` environment variables.

        Args:
            environ (Optional[Mapping[str, str]]): environment to read, defaults to ``os.environ``

        Returns (Settings): the resolved settings
        """
        environ = os.environ if environ is None else environ
        converters: Dict[str, Callable[[str], Any]] = {
            "guard": int,
            "tolerance": float,
            "power_tolerance": float,
            "slack": float,
            "bisection_tolerance": float,
            "log_slack": float,
            "baseline_dir": Path,
            "log_level": str.upper,
        }
        changes: Dict[str, Any] = {}
        for field in fields(cls):
            key = ENV_PREFIX + field.name.upper()
            if key not in environ:
                continue
            try:
                changes[field.name] = converters[field.name](environ[key])
            except ValueError as error:
                raise ConfigurationError(f"{key}={environ[key]!r} is not a valid {field.name}") from error
        return cls(**changes).validated()

    def validated(self) -> Settings:
        if self.guard < 1:
            raise ConfigurationError(f"guard must be positive, got {self.guard}")
        if self.slack < 1.0:
            raise ConfigurationError(f"slack must be at least 1, got {self.slack}")
        if not 0 < self.tolerance < 1 or not 0 < self.power_tolerance < 1:
            raise ConfigurationError("tolerances must lie in (0, 1)")
        if logging.getLevelName(self.log_level) == f"Level {self.log_level}":
            raise ConfigurationError(f"unknown log level {self.log_level!r}")
        return self


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Returns the process-wide settings, resolving them from the environment on first use."""
    global _settings  # pylint: disable=global-statement
    if _settings is None:
        _settings = Settings.from_env()
        logger.debug("resolved settings %s", _settings)
    return _settings


@contextmanager
def override_settings(**changes: Any) -> Iterator[Settings]:
    """Installs a modified copy of the current settings for the duration of the block.

    Args:
        changes (Any): field values replacing the current ones

    Returns (Iterator[Settings]): the installed settings
    """
    global _settings  # pylint: disable=global-statement
    previous = get_settings()
    _settings = replace(previous, **changes).validated()
    try:
        yield _settings
    finally:
        _settings = previous
