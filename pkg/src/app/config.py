import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from components.gpr_core.constants import DEFAULT_TEST_NODES

env_path = Path(__file__).parents[2] / ".env"
load_dotenv(env_path)

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True, slots=True)
class Settings:
    threads: int
    log_level: str
    quad_nodes: int


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    """Read GP_LAB_* settings, reporting every malformed variable at once."""
    environ = os.environ if environ is None else environ
    errors: list[str] = []

    def positive_int(name: str, default: int) -> int:
        raw = environ.get(name, "").strip()
        if not raw:
            return default
        try:
            value = int(raw)
        except ValueError:
            errors.append(f"{name}={raw!r} is not an integer")
            return default
        if value < 1:
            errors.append(f"{name}={value} must be >= 1")
        return value

    threads = positive_int("GP_LAB_THREADS", os.cpu_count() or 1)
    quad_nodes = positive_int("GP_LAB_QUAD_NODES", DEFAULT_TEST_NODES)
    log_level = environ.get("GP_LAB_LOG_LEVEL", "INFO").strip().upper() or "INFO"
    if log_level not in LOG_LEVELS:
        errors.append(f"GP_LAB_LOG_LEVEL={log_level!r} not one of {', '.join(LOG_LEVELS)}")
    if errors:
        raise RuntimeError("Configuration errors: " + "; ".join(errors))

    return Settings(threads=threads, log_level=log_level, quad_nodes=quad_nodes)
