import logging
import os
from dataclasses import dataclass
from typing import Mapping

from dotenv import load_dotenv

from lafs.core.types import ConfigurationError, Strategy

load_dotenv()

# exit codes
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3


@dataclass(frozen=True)
class Settings:
    """Command defaults read from LAFS_* environment variables (or a .env file)."""

    strategy: Strategy = Strategy.TWO
    levels: int = 2
    seed: int = 0
    bench_queries: int = 100000
    log_level: str = "WARNING"


def _integer(environ: Mapping[str, str], name: str, default: int, minimum: int) -> int:
    raw = environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exception:
        raise ConfigurationError(
            f"{name} must be an integer, got {raw!r}"
        ) from exception
    if value < minimum:
        raise ConfigurationError(f"{name} must be at least {minimum}, got {value}")
    return value


def load_settings(environ: Mapping[str, str] = os.environ) -> Settings:
    defaults = Settings()
    raw_strategy = environ.get("LAFS_STRATEGY", defaults.strategy.value)
    try:
        strategy = Strategy(raw_strategy.strip().lower())
    except ValueError as exception:
        choices = ", ".join(s.value for s in Strategy)
        raise ConfigurationError(
            f"LAFS_STRATEGY must be one of {choices}, got {raw_strategy!r}"
        ) from exception
    log_level = environ.get("LAFS_LOG_LEVEL", defaults.log_level).strip().upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ConfigurationError(
            f"LAFS_LOG_LEVEL is not a logging level: {log_level!r}"
        )
    return Settings(
        strategy=strategy,
        levels=_integer(environ, "LAFS_LEVELS", defaults.levels, 1),
        seed=_integer(environ, "LAFS_SEED", defaults.seed, 0),
        bench_queries=_integer(
            environ, "LAFS_BENCH_QUERIES", defaults.bench_queries, 1
        ),
        log_level=log_level,
    )
