"""Runtime settings for Frechet Polytope."""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from frechet.errors import ConfigError

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _default_data_dir() -> Path:
    return Path.home() / ".frechet-polytope"


@dataclass
class Settings:
    """Defaults for storage, guards and parallelism."""

    data_dir: Path = field(default_factory=_default_data_dir)
    max_bruteforce_d: int = 5
    workers: int = 1
    log_level: str = "WARNING"

    @property
    def store_path(self) -> Path:
        """Default location of the SQLite vertex store."""
        return self.data_dir / "vertices.db"

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build settings, letting FRECHET_* variables override the defaults."""
        env = os.environ if environ is None else environ
        settings = cls()

        if env.get("FRECHET_HOME"):
            settings.data_dir = Path(env["FRECHET_HOME"]).expanduser()
        if env.get("FRECHET_MAX_D"):
            settings.max_bruteforce_d = _positive_int(env["FRECHET_MAX_D"], "FRECHET_MAX_D")
        if env.get("FRECHET_WORKERS"):
            settings.workers = _positive_int(env["FRECHET_WORKERS"], "FRECHET_WORKERS")
        if env.get("FRECHET_LOG_LEVEL"):
            level = env["FRECHET_LOG_LEVEL"].upper()
            if level not in _LOG_LEVELS:
                raise ConfigError(f"FRECHET_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}")
            settings.log_level = level

        return settings


def _positive_int(raw: str, name: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value
