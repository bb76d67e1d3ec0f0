"""
Runtime settings for ltlf-datagen.

Values come from environment variables, optionally loaded from a `.env` file
in the working directory. Every cap has a default suited to desk-scale runs.
"""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from ltlf_datagen.exceptions import ConfigError


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer (got {raw!r})") from e
    if value < 0:
        raise ConfigError(f"{name} must be non-negative (got {value})")
    return value


@dataclass(frozen=True)
class Settings:
    """
    Caps and defaults shared by the library and the command line.

    Attributes:
        cache_size: Maximum number of solution pools kept in memory (0 disables caching)
        max_states: Automaton state cap during compilation
        solver_max_tuples: Largest assignment grid a single solve may enumerate
        equiv_max_traces: Largest number of traces the equivalence oracle enumerates
        workers: Default worker count for generation
    """

    cache_size: int = 4096
    max_states: int = 4096
    solver_max_tuples: int = 1_000_000
    equiv_max_traces: int = 2_000_000
    workers: int = 1

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from the process environment."""
        return cls(
            cache_size=_env_int("LTLF_DATAGEN_CACHE_SIZE", cls.cache_size),
            max_states=_env_int("LTLF_DATAGEN_MAX_STATES", cls.max_states),
            solver_max_tuples=_env_int("LTLF_DATAGEN_SOLVER_MAX_TUPLES", cls.solver_max_tuples),
            equiv_max_traces=_env_int("LTLF_DATAGEN_EQUIV_MAX_TRACES", cls.equiv_max_traces),
            workers=max(1, _env_int("LTLF_DATAGEN_WORKERS", cls.workers)),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load settings once per process.

    Reads `.env` first (without overriding variables already set).
    """
    load_dotenv()
    return Settings.from_env()
