"""Environment-driven configuration for ppbound."""

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass

logger = logging.getLogger(__name__)

MIN_PRECISION = 128
DEFAULT_PRECISION = 128
DEFAULT_MAX_CANDIDATES = 10**8
DEFAULT_JOBS = 1
DEFAULT_RESULTS_DIR = "results"

# Composite cofactors left after trial division must stay below this.
FACTOR_SIZE_LIMIT = 2**64


@dataclass(frozen=True)
class Settings:
    """Runtime configuration."""

    precision: int = DEFAULT_PRECISION  # fractional bits for reals
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    jobs: int = DEFAULT_JOBS
    results_dir: str = DEFAULT_RESULTS_DIR


def _read_int(environ: Mapping[str, str], name: str, default: int, minimum: int) -> int:
    raw = environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default
    if value < minimum:
        logger.warning(f"{name}={value} is below {minimum}, using {minimum}")
        return minimum
    return value


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    """
    Load settings from environment variables.

    Reads PPB_PRECISION, PPB_MAX_CANDIDATES, PPB_JOBS and PPB_RESULTS_DIR.

    Args:
        environ: Mapping to read from (defaults to os.environ)

    Returns:
        Settings instance
    """
    env = os.environ if environ is None else environ
    return Settings(
        precision=_read_int(env, "PPB_PRECISION", DEFAULT_PRECISION, MIN_PRECISION),
        max_candidates=_read_int(
            env, "PPB_MAX_CANDIDATES", DEFAULT_MAX_CANDIDATES, 1
        ),
        jobs=_read_int(env, "PPB_JOBS", DEFAULT_JOBS, 1),
        results_dir=env.get("PPB_RESULTS_DIR") or DEFAULT_RESULTS_DIR,
    )
