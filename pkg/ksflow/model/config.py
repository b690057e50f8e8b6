"""Model and stepper configuration values."""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from ksflow.errors import InvalidConfig
from ksflow.spectral.grid import GridSpec

from .sensitivity import SensitivitySpec


class Fluid(str, Enum):
    """Fluid coupling of the cell-oxygen system."""

    NONE = "none"
    STOKES = "stokes"
    NAVIER_STOKES = "navier_stokes"

    @property
    def code(self) -> int:
        return _FLUID_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "Fluid":
        for fluid, value in _FLUID_CODES.items():
            if value == code:
                return fluid
        raise InvalidConfig(f"unknown fluid code {code}")


_FLUID_CODES = {Fluid.NONE: 0, Fluid.STOKES: 1, Fluid.NAVIER_STOKES: 2}


class Scheme(str, Enum):
    IMEX_EULER = "imex_euler"
    IMEX_BDF2 = "imex_bdf2"


@dataclass(frozen=True)
class StepperConfig:
    """Time-step control for the IMEX integrator."""

    scheme: Scheme = Scheme.IMEX_BDF2
    dt_init: float = 1e-3
    cfl_safety: float = 0.5
    dt_max: float = 1e-2
    dt_min: float = 1e-8
    hyperbolic_filter_order: int = 16
    adaptive: bool = True
    blowup_factor: float = 1e3

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not 0 < self.cfl_safety <= 1:
            raise InvalidConfig(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if not 0 < self.dt_min <= self.dt_init <= self.dt_max:
            raise InvalidConfig(
                "need 0 < dt_min <= dt_init <= dt_max, got "
                f"{self.dt_min}, {self.dt_init}, {self.dt_max}"
            )
        order = self.hyperbolic_filter_order
        if int(order) != order or order < 8 or order % 2:
            raise InvalidConfig(
                f"filter order must be an even integer >= 8, got {order}"
            )
        if not self.blowup_factor > 1:
            raise InvalidConfig(
                f"blowup_factor must exceed 1, got {self.blowup_factor}"
            )

    def scaled_in_time(self, factor: float) -> "StepperConfig":
        """Copy with every time length multiplied by factor."""
        return replace(
            self,
            dt_init=self.dt_init * factor,
            dt_max=self.dt_max * factor,
            dt_min=self.dt_min * factor,
        )


@dataclass(frozen=True)
class ModelConfig:
    """Everything that defines one simulation besides its initial data."""

    grid: GridSpec
    mu: int = 1
    fluid: Fluid = Fluid.NAVIER_STOKES
    grad_phi: tuple[float, float] = (0.0, 0.0)
    sensitivity: SensitivitySpec = field(default_factory=SensitivitySpec)
    t_end: float = 1.0
    sample_interval: float = 0.1
    stepper: StepperConfig = field(default_factory=StepperConfig)

    def __post_init__(self):
        if self.mu not in (0, 1) or isinstance(self.mu, bool):
            raise InvalidConfig(f"mu must be 0 or 1, got {self.mu}")
        object.__setattr__(self, "mu", int(self.mu))
        object.__setattr__(self, "fluid", Fluid(self.fluid))
        grad_phi = tuple(float(v) for v in self.grad_phi)
        if len(grad_phi) != 2 or not all(np.isfinite(grad_phi)):
            raise InvalidConfig(
                f"grad_phi must be two finite numbers, got {self.grad_phi}"
            )
        object.__setattr__(self, "grad_phi", grad_phi)
        if not np.isfinite(self.t_end) or self.t_end < 0:
            raise InvalidConfig(f"t_end must be >= 0, got {self.t_end}")
        if not self.sample_interval > 0:
            raise InvalidConfig(
                f"sample_interval must be positive, got {self.sample_interval}"
            )
        if self.t_end > 0 and self.sample_interval > self.t_end:
            raise InvalidConfig(
                f"sample_interval {self.sample_interval} exceeds t_end {self.t_end}"
            )

    @property
    def hyperbolic(self) -> bool:
        return self.mu == 0

    def replace(self, **changes) -> "ModelConfig":
        return replace(self, **changes)
