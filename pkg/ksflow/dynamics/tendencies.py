"""Right-hand sides of the cell-oxygen-fluid system in spectral form."""

from dataclasses import dataclass

import numpy as np

from ksflow.errors import NumericalBreakdown
from ksflow.model.config import Fluid, ModelConfig
from ksflow.spectral.grid import GridSpec, ScalarField, VectorField
from ksflow.spectral.ops import (
    derivative_factor,
    forward_array,
    inverse_array,
    project_coeffs,
)

from .state import State

# Row order of stacked spectral arrays.
N, C, UX, UY = range(4)


def stack_state(state: State) -> np.ndarray:
    """Spectra of (n, c, ux, uy) stacked along a leading axis."""
    return np.stack(
        [
            forward_array(state.n.values),
            forward_array(state.c.values),
            forward_array(state.u.x.values),
            forward_array(state.u.y.values),
        ]
    )


def unstack_state(grid: GridSpec, t: float, fields_hat: np.ndarray) -> State:
    n, c, ux, uy = (inverse_array(fields_hat[i], grid) for i in range(4))
    return State.from_arrays(grid, t, n, c, ux, uy)


def linear_coefficients(grid: GridSpec, mu: int) -> np.ndarray:
    """Diagonal diffusion symbols for (n, c, ux, uy); unit diffusivity and viscosity."""
    k2 = grid.k_squared
    return np.stack([-k2, -mu * k2, -k2, -k2])


def explicit_terms(model: ModelConfig, fields_hat: np.ndarray) -> np.ndarray:
    """
    Transport, chemotaxis, consumption and forcing terms, dealiased.

    The cell flux is differentiated in divergence form so the mean mode of the
    n tendency is exactly zero. Velocity terms are Leray-projected.

    Args:
        model: Model configuration.
        fields_hat: Stacked spectra of (n, c, ux, uy).

    Returns:
        Stacked spectral tendencies with the same layout.
    """
    grid = model.grid
    mask = grid.dealias_mask
    sens = model.sensitivity
    dx = derivative_factor(grid, "x", 1)
    dy = derivative_factor(grid, "y", 1)

    def to_grid(coeffs: np.ndarray) -> np.ndarray:
        return inverse_array(coeffs, grid)

    def product(values: np.ndarray) -> np.ndarray:
        return np.where(mask, forward_array(values), 0.0)

    n_hat, c_hat, u_hat, v_hat = fields_hat
    n = to_grid(n_hat)
    c = to_grid(c_hat)
    cx = to_grid(dx * c_hat)
    cy = to_grid(dy * c_hat)

    drift = to_grid(product(sens.chi(c) * n))
    consumption = product(to_grid(product(sens.k(c))) * n)

    out = np.zeros_like(fields_hat)
    if model.fluid is Fluid.NONE:
        flux_x = product(drift * cx)
        flux_y = product(drift * cy)
        out[C] = -consumption
    else:
        u = to_grid(u_hat)
        v = to_grid(v_hat)
        flux_x = product(u * n + drift * cx)
        flux_y = product(v * n + drift * cy)
        out[C] = -product(u * cx + v * cy) - consumption

        gx, gy = model.grad_phi
        force_x = -gx * n_hat
        force_y = -gy * n_hat
        if model.fluid is Fluid.NAVIER_STOKES:
            uv = product(u * v)
            force_x = force_x - (dx * product(u * u) + dy * uv)
            force_y = force_y - (dx * uv + dy * product(v * v))
        out[UX], out[UY] = project_coeffs(
            grid, np.where(mask, force_x, 0.0), np.where(mask, force_y, 0.0)
        )

    out[N] = -(dx * flux_x + dy * flux_y)

    if not np.all(np.isfinite(out)):
        raise NumericalBreakdown("non-finite explicit tendency")
    return out


@dataclass(frozen=True, eq=False)
class Tendencies:
    dn: ScalarField
    dc: ScalarField
    du: VectorField


def compute_tendencies(s: State, m: ModelConfig) -> Tendencies:
    """
    Full time derivatives of (n, c, u) at a state.

    Diffusion terms are included; du is divergence-free and zero without a fluid.

    Raises:
        NumericalBreakdown: a product produced NaN or infinite values.
    """
    grid = m.grid
    fields_hat = stack_state(s)
    total = explicit_terms(m, fields_hat) + linear_coefficients(grid, m.mu) * fields_hat
    if m.fluid is Fluid.NONE:
        total[UX] = 0.0
        total[UY] = 0.0
    if not np.all(np.isfinite(total)):
        raise NumericalBreakdown("non-finite tendency", t=s.t)
    dn, dc, dux, duy = (inverse_array(total[i], grid) for i in range(4))
    return Tendencies(
        dn=ScalarField(grid, dn),
        dc=ScalarField(grid, dc),
        du=VectorField.from_arrays(grid, dux, duy),
    )
