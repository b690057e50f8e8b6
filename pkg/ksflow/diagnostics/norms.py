"""Norms and integral functionals of single states."""

from typing import TYPE_CHECKING

import numpy as np

from ksflow.errors import InvalidExponent, StaleState
from ksflow.spectral.grid import GridSpec, ScalarField, VectorField
from ksflow.spectral.ops import curl, gradient

if TYPE_CHECKING:
    from ksflow.dynamics.state import State

ENTROPY_FLOOR = 1e-300


def require_unflagged(s: "State") -> None:
    if s.flagged:
        raise StaleState(f"state at t={s.t:.6g} is flagged")


def lp_norm_values(values: np.ndarray, grid: GridSpec, p: float) -> float:
    if p == np.inf:
        return float(np.max(np.abs(values))) if values.size else 0.0
    return float((np.sum(np.abs(values) ** p) * grid.cell_area) ** (1.0 / p))


def lp_norm(f: ScalarField, p: float) -> float:
    """
    Grid L^p norm (sum |f|^p hx hy)^(1/p); p = inf gives max |f|.

    Raises:
        InvalidExponent: p < 1.
    """
    if not p >= 1:
        raise InvalidExponent(f"norm exponent must be >= 1, got {p}")
    return lp_norm_values(f.values, f.grid, p)


def mass(f: ScalarField) -> float:
    return f.integral()


def entropy_values(n: np.ndarray, grid: GridSpec) -> float:
    positive = np.maximum(n, 0.0)
    return float(
        np.sum(positive * np.log(np.maximum(n, ENTROPY_FLOOR))) * grid.cell_area
    )


def entropy(s: "State") -> float:
    """Integral of max(n, 0) ln max(n, 1e-300)."""
    require_unflagged(s)
    return entropy_values(s.n.values, s.grid)


def vorticity(u: VectorField) -> ScalarField:
    """Spectral curl d(u_y)/dx - d(u_x)/dy."""
    return curl(u)


def kinetic_energy(u: VectorField) -> float:
    """Squared L^2 norm of the velocity."""
    return float(np.sum(u.x.values**2 + u.y.values**2) * u.grid.cell_area)


def grad_l2(f: ScalarField) -> float:
    grad = gradient(f)
    return float(np.sqrt(kinetic_energy(grad)))


def moment_centered(s: "State") -> float:
    """
    Integral of (1 + d(x)^2)^(1/2) n with d the periodic distance to the box center.

    Stands in for the whole-space moment weighted by <x>.
    """
    require_unflagged(s)
    grid = s.grid
    x, y = grid.mesh
    # nodes lie in [0, L), so the periodic distance to L/2 is |x - L/2|
    dx = x - grid.lx / 2
    dy = y - grid.ly / 2
    weight = np.sqrt(1.0 + dx**2 + dy**2)
    return float(np.sum(weight * s.n.values) * grid.cell_area)


def energy_functional(s: "State") -> float:
    """|grad c|^2 + |omega|^2 + int n |ln n| + |u|^2, all in L^2 on the grid."""
    require_unflagged(s)
    grid = s.grid
    n = np.maximum(s.n.values, 0.0)
    n_log = np.sum(n * np.abs(np.log(np.maximum(s.n.values, ENTROPY_FLOOR))))
    omega = vorticity(s.u).values
    return float(
        grad_l2(s.c) ** 2
        + np.sum(omega**2) * grid.cell_area
        + n_log * grid.cell_area
        + kinetic_energy(s.u)
    )
