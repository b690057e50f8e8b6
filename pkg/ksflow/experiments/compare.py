"""Per-sample differences between two trajectories."""

from typing import Literal

import numpy as np
import pandas as pd

from ksflow.diagnostics.norms import lp_norm_values
from ksflow.dynamics.trajectory import Trajectory
from ksflow.errors import EmptyInput, InvalidConfig

TIME_TOLERANCE = 1e-12


def compare_trajectories(
    a: Trajectory, b: Trajectory, norm: Literal["linf", "l2"] = "linf"
) -> pd.DataFrame:
    """
    Field differences at the sample times the two trajectories share.

    Args:
        a: First trajectory.
        b: Second trajectory, on the same grid.
        norm: "linf" for max |a - b| or "l2" for the grid L^2 norm.

    Returns:
        DataFrame with columns t, n, c, u and max (largest of the three).

    Raises:
        GridMismatch: the trajectories use different grids.
    """
    if norm not in ("linf", "l2"):
        raise InvalidConfig(f"unknown norm {norm!r}")
    a.config.grid.require_same(b.config.grid)
    grid = a.config.grid
    p = np.inf if norm == "linf" else 2

    rows = []
    for sa in a.samples:
        matches = [sb for sb in b.samples if abs(sb.t - sa.t) <= TIME_TOLERANCE]
        if not matches:
            continue
        sb = matches[0]
        dn = lp_norm_values(sa.n.values - sb.n.values, grid, p)
        dc = lp_norm_values(sa.c.values - sb.c.values, grid, p)
        du = lp_norm_values(
            np.hypot(sa.u.x.values - sb.u.x.values, sa.u.y.values - sb.u.y.values),
            grid,
            p,
        )
        rows.append({"t": sa.t, "n": dn, "c": dc, "u": du, "max": max(dn, dc, du)})

    if not rows:
        raise EmptyInput("trajectories share no sample times")
    return pd.DataFrame(rows, columns=["t", "n", "c", "u", "max"])
