from functools import lru_cache
from pathlib import Path
from typing import Dict

from dotenv import dotenv_values
from pydantic_settings import BaseSettings

from afcsim.core.exceptions import ConfigError


class Settings(BaseSettings):
    PROJECT_NAME: str = "AFCS Simulator"
    LOG_LEVEL: str = "INFO"

    # Monte Carlo defaults
    DEFAULT_SEED: int = 0
    DEFAULT_TRIALS: int = 10000
    CHUNK_SIZE: int = 4096  # trials per deterministic chunk
    WORKERS: int = 1

    # Celery transport for distributed ensembles
    BROKER_URL: str = "redis://localhost:6379"
    RESULT_BACKEND: str = "redis://localhost:6379"

    model_config = {
        "env_file": ".env",
        "env_prefix": "AFCSIM_",
    }


@lru_cache
def get_settings():
    return Settings()


settings = get_settings()


def read_config_file(path: str | Path) -> Dict[str, str]:
    """Read a flat ``key = value`` system-config file.

    ``#`` starts a comment. Keys without a value are reported as errors; key
    names are checked against the model later, when the values are validated.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(str(path), "config file not found")

    values = dotenv_values(path)
    raw: Dict[str, str] = {}
    for key, value in values.items():
        if value is None or value.strip() == "":
            raise ConfigError(key, "missing value")
        raw[key.strip()] = value.strip()
    return raw


def parse_overrides(pairs: list[str]) -> Dict[str, str]:
    """Parse repeated ``key=value`` command-line overrides"""
    raw: Dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigError(pair, "override must have the form key=value")
        raw[key.strip()] = value.strip()
    return raw
