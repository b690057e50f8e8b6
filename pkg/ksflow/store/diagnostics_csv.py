"""Diagnostics CSV files, one row per accepted step."""

from pathlib import Path
from typing import Iterable, Union

import pandas as pd

from ksflow.diagnostics.records import CSV_COLUMNS, DiagnosticsRecord, records_frame
from ksflow.errors import InvalidSeries

FLOAT_FORMAT = "%.17g"


def write_diagnostics_csv(
    records: Union[pd.DataFrame, Iterable[DiagnosticsRecord]], path: str | Path
) -> Path:
    """
    Write records with the fixed header and 17 significant digits.

    Args:
        records: DiagnosticsRecord sequence or a frame with the CSV columns.
        path: Destination file.

    Returns:
        The written path.
    """
    frame = records if isinstance(records, pd.DataFrame) else records_frame(records)
    frame = frame.loc[:, list(CSV_COLUMNS)]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path,
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )
    return path


def read_diagnostics_csv(path: str | Path) -> pd.DataFrame:
    """Read a diagnostics CSV, checking the header and time ordering."""
    frame = pd.read_csv(path, dtype=float, float_precision="round_trip")
    if tuple(frame.columns) != CSV_COLUMNS:
        raise InvalidSeries(f"{path} does not have the diagnostics header")
    if (frame["t"].diff().dropna() < 0).any():
        raise InvalidSeries(f"{path} has decreasing times")
    return frame
