"""Output locations and environment-driven defaults."""

import os
from pathlib import Path


def get_output_dir(directory: str | Path | None = None) -> Path:
    """Get the output directory, creating it if needed."""
    output = Path(directory or os.getenv("KSFLOW_OUTPUT_DIR", "./data/runs"))
    output.mkdir(parents=True, exist_ok=True)
    return output


def get_max_workers() -> int:
    """Default sweep concurrency from KSFLOW_MAX_WORKERS."""
    try:
        return max(1, int(os.getenv("KSFLOW_MAX_WORKERS", "1")))
    except ValueError:
        return 1


def get_log_level() -> str:
    return os.getenv("KSFLOW_LOG_LEVEL", "WARNING").upper()


def value_dirname(value: float) -> str:
    """Directory name for one swept parameter value."""
    return f"{value:.17g}"
