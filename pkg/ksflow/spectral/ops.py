"""Spectral transforms and operators on periodic fields."""

from typing import Literal

import numpy as np

from ksflow.errors import InvalidField, MeanNotZero, NotSupported

from .grid import GridSpec, ScalarField, SpectrumField, VectorField

Axis = Literal["x", "y"]


def forward_array(values: np.ndarray) -> np.ndarray:
    return np.fft.rfft2(values)


def inverse_array(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    return np.fft.irfft2(coeffs, s=grid.shape)


def transform_forward(f: ScalarField) -> SpectrumField:
    """
    Unnormalized forward transform of a real field.

    Args:
        f: Field to transform.

    Returns:
        Half-spectrum coefficients; the inverse carries the 1/(nx*ny) factor.
    """
    if not np.all(np.isfinite(f.values)):
        raise InvalidField("cannot transform a field with non-finite values")
    return SpectrumField(f.grid, forward_array(f.values))


def transform_inverse(spectrum: SpectrumField) -> ScalarField:
    return ScalarField(spectrum.grid, inverse_array(spectrum.coeffs, spectrum.grid))


def derivative_factor(grid: GridSpec, axis: Axis, order: int) -> np.ndarray:
    """Multiplier (i k_axis)^order with the Nyquist mode removed for odd orders."""
    if order not in (1, 2):
        raise NotSupported(f"derivative order {order} not supported")
    kx, ky = grid.wavenumbers
    if axis == "x":
        k = kx
    elif axis == "y":
        k = ky
    else:
        raise NotSupported(f"unknown axis {axis!r}")

    factor = (1j * k) ** order
    if order % 2 == 1:
        factor = factor.copy()
        if axis == "x":
            factor[grid.nx // 2, :] = 0.0
        else:
            factor[:, grid.ny // 2] = 0.0
    return factor


def derivative(f: SpectrumField, axis: Axis, order: int = 1) -> SpectrumField:
    return SpectrumField(f.grid, f.coeffs * derivative_factor(f.grid, axis, order))


def laplacian(f: SpectrumField) -> SpectrumField:
    return SpectrumField(f.grid, -f.grid.k_squared * f.coeffs)


def solve_poisson(rhs: SpectrumField) -> SpectrumField:
    """
    Solve Laplacian(psi) = rhs for the mean-zero psi.

    Raises:
        MeanNotZero: rhs has a mean mode above 1e-12 of its norm.
    """
    grid = rhs.grid
    scale = float(np.linalg.norm(rhs.coeffs))
    if abs(rhs.coeffs[0, 0]) > 1e-12 * scale:
        raise MeanNotZero(
            f"Poisson right-hand side has mean {rhs.mean:.3e}; "
            "periodic solve needs zero"
        )
    psi = -rhs.coeffs / grid.k_squared_safe
    psi[0, 0] = 0.0
    return SpectrumField(grid, psi)


def project_coeffs(
    grid: GridSpec, u_hat: np.ndarray, v_hat: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Remove the gradient part of a vector field given by its spectra."""
    kx, ky = grid.wavenumbers
    k_dot_u = (kx * u_hat + ky * v_hat) / grid.k_squared_safe
    return u_hat - kx * k_dot_u, v_hat - ky * k_dot_u


def leray_project(v: VectorField) -> VectorField:
    """Project a vector field onto its divergence-free part."""
    grid = v.grid
    if not (np.all(np.isfinite(v.x.values)) and np.all(np.isfinite(v.y.values))):
        raise InvalidField("cannot project a field with non-finite values")
    u_hat, v_hat = project_coeffs(
        grid, forward_array(v.x.values), forward_array(v.y.values)
    )
    return VectorField.from_arrays(
        grid, inverse_array(u_hat, grid), inverse_array(v_hat, grid)
    )


def dealias(f: SpectrumField) -> SpectrumField:
    """Zero every mode outside the 2/3 box."""
    return SpectrumField(f.grid, np.where(f.grid.dealias_mask, f.coeffs, 0.0))


def gradient(f: ScalarField) -> VectorField:
    spectrum = transform_forward(f)
    return VectorField(
        transform_inverse(derivative(spectrum, "x")),
        transform_inverse(derivative(spectrum, "y")),
    )


def divergence(v: VectorField) -> ScalarField:
    grid = v.grid
    coeffs = derivative_factor(grid, "x", 1) * forward_array(
        v.x.values
    ) + derivative_factor(grid, "y", 1) * forward_array(v.y.values)
    return ScalarField(grid, inverse_array(coeffs, grid))


def curl(v: VectorField) -> ScalarField:
    """Scalar curl d(v_y)/dx - d(v_x)/dy."""
    grid = v.grid
    coeffs = derivative_factor(grid, "x", 1) * forward_array(
        v.y.values
    ) - derivative_factor(grid, "y", 1) * forward_array(v.x.values)
    return ScalarField(grid, inverse_array(coeffs, grid))


def spectral_l2_squared(f: SpectrumField) -> float:
    """Grid-weighted sum of |f|^2 evaluated from the half spectrum."""
    grid = f.grid
    total = np.sum(grid.parseval_weights * np.abs(f.coeffs) ** 2)
    return float(total * grid.cell_area / grid.size)


def max_divergence(v: VectorField) -> float:
    """Largest |k . u_hat| over the spectrum."""
    grid = v.grid
    kx, ky = grid.wavenumbers
    k_dot_u = kx * forward_array(v.x.values) + ky * forward_array(v.y.values)
    return float(np.max(np.abs(k_dot_u)))


def divergence_residual(v: VectorField) -> float:
    """max |k . u_hat| relative to max |u_hat|; zero for a zero field."""
    u_hat = forward_array(v.x.values)
    v_hat = forward_array(v.y.values)
    scale = max(float(np.max(np.abs(u_hat))), float(np.max(np.abs(v_hat))))
    if scale == 0.0:
        return 0.0
    kx, ky = v.grid.wavenumbers
    return float(np.max(np.abs(kx * u_hat + ky * v_hat))) / scale
