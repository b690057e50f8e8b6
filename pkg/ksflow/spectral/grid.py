"""Periodic grid geometry and field containers."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ksflow.errors import GridMismatch, InvalidConfig, InvalidField


def _is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


@dataclass(frozen=True)
class GridSpec:
    """
    Doubly periodic box of nx by ny nodes.

    Arrays on the grid have shape (nx, ny) with x along axis 0. Spectral
    arrays keep the half spectrum of real data, shape (nx, ny // 2 + 1).
    """

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        for name in ("nx", "ny"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise InvalidConfig(f"{name} must be an integer, got {value!r}")
            if value < 8 or not _is_power_of_two(int(value)):
                raise InvalidConfig(f"{name} must be a power of two >= 8, got {value}")
        for name in ("lx", "ly"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidConfig(f"{name} must be positive, got {value}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return (self.nx, self.ny // 2 + 1)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def h(self) -> float:
        return min(self.hx, self.hy)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * self.hx

    @cached_property
    def y(self) -> np.ndarray:
        return np.arange(self.ny) * self.hy

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates X, Y of shape (nx, ny)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    @cached_property
    def kx(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.hx)

    @cached_property
    def ky(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.rfftfreq(self.ny, d=self.hy)

    @cached_property
    def mode_x(self) -> np.ndarray:
        """Integer mode numbers along x (first axis of the half spectrum)."""
        return np.fft.fftfreq(self.nx, d=1.0 / self.nx).astype(int)

    @cached_property
    def mode_y(self) -> np.ndarray:
        return np.arange(self.ny // 2 + 1)

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        """KX, KY of the half spectrum, shape (nx, ny // 2 + 1)."""
        return np.meshgrid(self.kx, self.ky, indexing="ij")

    @cached_property
    def k_squared(self) -> np.ndarray:
        kx, ky = self.wavenumbers
        return kx**2 + ky**2

    @cached_property
    def k_squared_safe(self) -> np.ndarray:
        """|k|^2 with the mean mode replaced by 1, for division."""
        k2 = self.k_squared.copy()
        k2[0, 0] = 1.0
        return k2

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        keep_x = np.abs(self.mode_x) <= self.nx / 3
        keep_y = self.mode_y <= self.ny / 3
        return np.outer(keep_x, keep_y)

    @cached_property
    def parseval_weights(self) -> np.ndarray:
        """Multiplicity of each half-spectrum column in the full spectrum."""
        weights = np.full(self.ny // 2 + 1, 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        return np.broadcast_to(weights, self.spectral_shape)

    def same_as(self, other: "GridSpec") -> bool:
        return (self.nx, self.ny, self.lx, self.ly) == (
            other.nx,
            other.ny,
            other.lx,
            other.ly,
        )

    def require_same(self, other: "GridSpec") -> None:
        if not self.same_as(other):
            raise GridMismatch(f"grid {other} does not match {self}")


def _check_real(grid: GridSpec, values: np.ndarray, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != grid.shape:
        if values.size == grid.size and values.ndim == 1:
            values = values.reshape(grid.shape)
        else:
            raise InvalidField(
                f"{name} has shape {values.shape}, expected {grid.shape}"
            )
    if not np.all(np.isfinite(values)):
        raise InvalidField(f"{name} contains non-finite values")
    return values


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real node values on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_real(self.grid, self.values, "field"))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> "ScalarField":
        """Sample func(X, Y) at the grid nodes."""
        x, y = grid.mesh
        return cls(grid, np.broadcast_to(func(x, y), grid.shape).copy())

    @property
    def flat(self) -> np.ndarray:
        """Row-major values of length nx * ny."""
        return self.values.reshape(-1)

    def integral(self) -> float:
        return float(np.sum(self.values) * self.grid.cell_area)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Two scalar components on one grid."""

    x: ScalarField
    y: ScalarField

    def __post_init__(self):
        if not self.x.grid.same_as(self.y.grid):
            raise InvalidField("vector components live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.x.grid

    @classmethod
    def zeros(cls, grid: GridSpec) -> "VectorField":
        return cls(ScalarField.zeros(grid), ScalarField.zeros(grid))

    @classmethod
    def from_arrays(cls, grid: GridSpec, ux, uy) -> "VectorField":
        return cls(ScalarField(grid, ux), ScalarField(grid, uy))

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.x.values, self.y.values)


@dataclass(frozen=True, eq=False)
class SpectrumField:
    """Half-spectrum coefficients of a real field (unnormalized forward FFT)."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != self.grid.spectral_shape:
            raise InvalidField(
                f"spectrum has shape {coeffs.shape}, "
                f"expected {self.grid.spectral_shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def mean(self) -> float:
        return float(self.coeffs[0, 0].real) / self.grid.size
