"""Simulation state (t, n, c, u)."""

from dataclasses import dataclass, replace

import numpy as np

from ksflow.errors import GridMismatch
from ksflow.spectral.grid import GridSpec, ScalarField, VectorField


@dataclass(frozen=True, eq=False)
class State:
    """
    Cell density n, oxygen c and velocity u at time t.

    flagged marks a state rejected by the run loop (undershoot or growth
    beyond the configured limits); functionals refuse flagged states.
    """

    t: float
    n: ScalarField
    c: ScalarField
    u: VectorField
    flagged: bool = False

    def __post_init__(self):
        grid = self.n.grid
        if not (grid.same_as(self.c.grid) and grid.same_as(self.u.grid)):
            raise GridMismatch("state fields live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.n.grid

    @classmethod
    def zeros(cls, grid: GridSpec, t: float = 0.0) -> "State":
        return cls(
            t, ScalarField.zeros(grid), ScalarField.zeros(grid), VectorField.zeros(grid)
        )

    @classmethod
    def from_arrays(
        cls,
        grid: GridSpec,
        t: float,
        n: np.ndarray,
        c: np.ndarray,
        ux: np.ndarray,
        uy: np.ndarray,
        flagged: bool = False,
    ) -> "State":
        return cls(
            float(t),
            ScalarField(grid, n),
            ScalarField(grid, c),
            VectorField.from_arrays(grid, ux, uy),
            flagged,
        )

    def mark_flagged(self) -> "State":
        return replace(self, flagged=True)
