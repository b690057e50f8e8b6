"""Initial data built from Gaussian bumps and simple velocity modes."""

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from ksflow.errors import InvalidConfig
from ksflow.spectral.grid import GridSpec
from ksflow.spectral.ops import forward_array, inverse_array, project_coeffs

from .config import Fluid, ModelConfig

if TYPE_CHECKING:
    from ksflow.dynamics.state import State


@dataclass(frozen=True)
class Blob:
    """Bump amplitude * exp(-|x - center|^2 / width^2) on the periodic box."""

    amplitude: float
    center: tuple[float, float]
    width: float

    def __post_init__(self):
        if not np.isfinite(self.amplitude) or self.amplitude < 0:
            raise InvalidConfig(f"blob amplitude must be >= 0, got {self.amplitude}")
        if not np.isfinite(self.width) or self.width <= 0:
            raise InvalidConfig(f"blob width must be positive, got {self.width}")
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    @property
    def mass(self) -> float:
        """Whole-plane integral of the bump."""
        return self.amplitude * np.pi * self.width**2

    def evaluate(self, grid: GridSpec) -> np.ndarray:
        x, y = grid.mesh
        # minimum-image distance keeps the bump periodic
        dx = (x - self.center[0] + grid.lx / 2) % grid.lx - grid.lx / 2
        dy = (y - self.center[1] + grid.ly / 2) % grid.ly - grid.ly / 2
        return self.amplitude * np.exp(-(dx**2 + dy**2) / self.width**2)

    def rescaled(self, amplitude: float, length: float) -> "Blob":
        return Blob(
            amplitude=self.amplitude * amplitude,
            center=(self.center[0] * length, self.center[1] * length),
            width=self.width * length,
        )


@dataclass(frozen=True)
class VelocityMode:
    """Initial velocity: "zero" or a fundamental Taylor-Green cell."""

    kind: str = "zero"
    amplitude: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "taylor_green"):
            raise InvalidConfig(f"unknown velocity mode {self.kind!r}")
        if not np.isfinite(self.amplitude):
            raise InvalidConfig("velocity amplitude must be finite")

    def evaluate(self, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "zero" or self.amplitude == 0.0:
            return np.zeros(grid.shape), np.zeros(grid.shape)
        x, y = grid.mesh
        kx = 2.0 * np.pi / grid.lx
        ky = 2.0 * np.pi / grid.ly
        ux = self.amplitude * np.sin(kx * x) * np.cos(ky * y)
        uy = -self.amplitude * (kx / ky) * np.cos(kx * x) * np.sin(ky * y)
        return ux, uy


@dataclass(frozen=True)
class InitialConditionSpec:
    n_blobs: tuple[Blob, ...] = ()
    c_blobs: tuple[Blob, ...] = ()
    c_background: float = 0.0
    u_mode: VelocityMode = VelocityMode()

    def __post_init__(self):
        object.__setattr__(self, "n_blobs", tuple(self.n_blobs))
        object.__setattr__(self, "c_blobs", tuple(self.c_blobs))
        if not np.isfinite(self.c_background) or self.c_background < 0:
            raise InvalidConfig(f"c_background must be >= 0, got {self.c_background}")

    @property
    def n_mass(self) -> float:
        return sum(blob.mass for blob in self.n_blobs)

    def n_field(self, grid: GridSpec) -> np.ndarray:
        values = np.zeros(grid.shape)
        for blob in self.n_blobs:
            values += blob.evaluate(grid)
        return values

    def c_field(self, grid: GridSpec) -> np.ndarray:
        values = np.full(grid.shape, float(self.c_background))
        for blob in self.c_blobs:
            values += blob.evaluate(grid)
        return values

    def with_n_factor(self, factor: float) -> "InitialConditionSpec":
        return replace(
            self, n_blobs=tuple(b.rescaled(factor, 1.0) for b in self.n_blobs)
        )

    def with_c_factor(self, factor: float) -> "InitialConditionSpec":
        return replace(
            self,
            c_blobs=tuple(b.rescaled(factor, 1.0) for b in self.c_blobs),
            c_background=self.c_background * factor,
        )


def build_initial_state(config: ModelConfig, ic: InitialConditionSpec) -> "State":
    """
    Sample the initial data on the grid and bring it into solver form.

    Every field is dealiased and the velocity is Leray-projected.

    Args:
        config: Model configuration supplying the grid and fluid choice.
        ic: Initial-condition description.

    Returns:
        State at t = 0.
    """
    from ksflow.dynamics.state import State

    grid = config.grid
    mask = grid.dealias_mask

    def _smooth(values: np.ndarray) -> np.ndarray:
        return inverse_array(np.where(mask, forward_array(values), 0.0), grid)

    n = _smooth(ic.n_field(grid))
    c = _smooth(ic.c_field(grid))

    if config.fluid is Fluid.NONE:
        ux = uy = np.zeros(grid.shape)
    else:
        ux0, uy0 = ic.u_mode.evaluate(grid)
        u_hat, v_hat = project_coeffs(
            grid,
            np.where(mask, forward_array(ux0), 0.0),
            np.where(mask, forward_array(uy0), 0.0),
        )
        ux = inverse_array(u_hat, grid)
        uy = inverse_array(v_hat, grid)

    return State.from_arrays(grid, 0.0, n, c, ux, uy)
