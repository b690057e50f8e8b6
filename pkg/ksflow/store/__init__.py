"""Configuration files, snapshots and diagnostics output."""

from .config_file import (
    DiagnosticsSettings,
    OutputSettings,
    RunConfig,
    format_config,
    load_config,
    parse_config,
)
from .diagnostics_csv import read_diagnostics_csv, write_diagnostics_csv
from .paths import get_log_level, get_max_workers, get_output_dir, value_dirname
from .plot_data import write_plot_data
from .snapshot import (
    Snapshot,
    read_snapshot,
    snapshot_from_state,
    state_from_snapshot,
    write_snapshot,
)

__all__ = [
    "DiagnosticsSettings",
    "OutputSettings",
    "RunConfig",
    "Snapshot",
    "format_config",
    "get_log_level",
    "get_max_workers",
    "get_output_dir",
    "load_config",
    "parse_config",
    "read_diagnostics_csv",
    "read_snapshot",
    "snapshot_from_state",
    "state_from_snapshot",
    "value_dirname",
    "write_diagnostics_csv",
    "write_plot_data",
    "write_snapshot",
]
