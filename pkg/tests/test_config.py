"""Tests for environment-driven settings."""

from pathlib import Path

import pytest

from frechet.config import Settings
from frechet.errors import ConfigError


def test_defaults():
    settings = Settings.from_env({})
    assert settings.max_bruteforce_d == 5
    assert settings.workers == 1
    assert settings.log_level == "WARNING"
    assert settings.store_path.name == "vertices.db"


def test_overrides(tmp_path):
    settings = Settings.from_env(
        {
            "FRECHET_HOME": str(tmp_path),
            "FRECHET_MAX_D": "6",
            "FRECHET_WORKERS": "4",
            "FRECHET_LOG_LEVEL": "debug",
        }
    )
    assert settings.data_dir == Path(tmp_path)
    assert settings.store_path == Path(tmp_path) / "vertices.db"
    assert settings.max_bruteforce_d == 6
    assert settings.workers == 4
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize(
    "env",
    [
        {"FRECHET_MAX_D": "five"},
        {"FRECHET_WORKERS": "0"},
        {"FRECHET_LOG_LEVEL": "LOUD"},
    ],
)
def test_bad_values(env):
    with pytest.raises(ConfigError):
        Settings.from_env(env)
