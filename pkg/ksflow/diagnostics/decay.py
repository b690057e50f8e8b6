"""Decay envelopes and power-law fits of sup-norm series."""

from typing import TYPE_CHECKING, Literal

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial

from ksflow.errors import EmptyInput, InvalidConfig, InvalidSeries

if TYPE_CHECKING:
    from ksflow.dynamics.trajectory import Trajectory

MIN_FIT_SAMPLES = 8


def _window_mask(t: np.ndarray, window: tuple[float, float]) -> np.ndarray:
    t0, t1 = window
    if not t0 < t1:
        raise EmptyInput(f"window [{t0}, {t1}] is empty")
    tol = 1e-12 * max(1.0, abs(t1))
    return (t >= t0 - tol) & (t <= t1 + tol)


def decay_envelope_series(
    t, y, gamma: float, window: tuple[float, float]
) -> float:
    """sup over the window of (1+t)^gamma * y."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = _window_mask(t, window)
    if not np.any(mask):
        raise EmptyInput(f"no samples in window {window}")
    return float(np.max((1.0 + t[mask]) ** gamma * y[mask]))


def sup_norm_series(
    traj: "Trajectory", field: Literal["n", "c"] = "n"
) -> tuple[np.ndarray, np.ndarray]:
    """Per-step sup norm of n or c from the trajectory's records."""
    frame = traj.records_frame()
    if field == "n":
        values = frame["linf_n"].to_numpy()
    elif field == "c":
        values = np.maximum(frame["max_c"].abs(), frame["min_c"].abs()).to_numpy()
    else:
        raise InvalidConfig(f"unknown field {field!r}")
    return frame["t"].to_numpy(), values


def decay_envelope(
    traj: "Trajectory",
    gamma: float,
    window: tuple[float, float],
    field: Literal["n", "c"] = "n",
) -> float:
    """
    Envelope sup (1+t)^gamma |n(t)|_inf over the records inside window.

    Args:
        traj: Trajectory whose per-step records are scanned.
        gamma: Decay exponent.
        window: Closed time window (t0, t1) with t0 < t1.
        field: "n" or "c".

    Returns:
        The envelope value.
    """
    t, y = sup_norm_series(traj, field)
    return decay_envelope_series(t, y, gamma, window)


def decay_fit(series, window: tuple[float, float]) -> float:
    """
    Least-squares slope of ln y against ln(1+t) inside window.

    Args:
        series: Pair (t, y) of sequences, or a DataFrame with columns t and y.
        window: Closed fit window.

    Returns:
        The fitted slope.
    """
    if isinstance(series, pd.DataFrame):
        t, y = series["t"].to_numpy(), series["y"].to_numpy()
    else:
        t, y = series
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = _window_mask(t, window)
    if np.count_nonzero(mask) < MIN_FIT_SAMPLES:
        raise InvalidSeries(
            f"need at least {MIN_FIT_SAMPLES} samples in window, "
            f"got {np.count_nonzero(mask)}"
        )
    if np.any(y[mask] <= 0) or not np.all(np.isfinite(y[mask])):
        raise InvalidSeries("decay fit needs positive finite values")
    coef = Polynomial.fit(np.log1p(t[mask]), np.log(y[mask]), 1).convert().coef
    return float(coef[1]) if len(coef) > 1 else 0.0
