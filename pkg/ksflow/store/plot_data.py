"""Two-column (t, value) text files for external plotting tools."""

from pathlib import Path

import numpy as np
import pandas as pd


def write_plot_data(frame: pd.DataFrame, directory: str | Path) -> list[Path]:
    """Write one <column>.dat file per diagnostic column."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    t = frame["t"].to_numpy()
    for column in frame.columns:
        if column == "t":
            continue
        path = directory / f"{column}.dat"
        np.savetxt(
            path,
            np.column_stack([t, frame[column].to_numpy()]),
            fmt="%.17g",
            header=f"t {column}",
        )
        written.append(path)
    return written
