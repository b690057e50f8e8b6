"""Periodic grids, Fourier transforms and spectral operators."""

from .grid import GridSpec, ScalarField, SpectrumField, VectorField
from .ops import (
    curl,
    dealias,
    derivative,
    divergence,
    divergence_residual,
    gradient,
    laplacian,
    leray_project,
    max_divergence,
    solve_poisson,
    spectral_l2_squared,
    transform_forward,
    transform_inverse,
)

__all__ = [
    "GridSpec",
    "ScalarField",
    "SpectrumField",
    "VectorField",
    "curl",
    "dealias",
    "derivative",
    "divergence",
    "divergence_residual",
    "gradient",
    "laplacian",
    "leray_project",
    "max_divergence",
    "solve_poisson",
    "spectral_l2_squared",
    "transform_forward",
    "transform_inverse",
]
