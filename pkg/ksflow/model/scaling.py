"""Parabolic rescaling of a problem by a length factor R."""

from dataclasses import replace

from ksflow.errors import InvalidConfig
from ksflow.spectral.grid import GridSpec

from .config import ModelConfig
from .initial import Blob, InitialConditionSpec, VelocityMode


def scaled_problem(
    config: ModelConfig, ic: InitialConditionSpec, R: float
) -> tuple[ModelConfig, InitialConditionSpec]:
    """
    Build the problem solved by n_R(t, x) = R^2 n(R^2 t, R x).

    Lengths shrink by R and times by R^2 on the same node count, so both runs
    resolve their features with the same number of points. Cell densities grow
    by R^2, velocities and the force gradient by R, and c is unchanged.

    Args:
        config: Base model configuration.
        ic: Base initial data.
        R: Positive scale factor.

    Returns:
        Tuple (scaled config, scaled initial data).
    """
    if not R > 0:
        raise InvalidConfig(f"scale factor must be positive, got {R}")

    time = 1.0 / R**2
    base = config.grid
    grid = GridSpec(nx=base.nx, ny=base.ny, lx=base.lx / R, ly=base.ly / R)
    scaled_config = replace(
        config,
        grid=grid,
        grad_phi=(config.grad_phi[0] * R, config.grad_phi[1] * R),
        t_end=config.t_end * time,
        sample_interval=config.sample_interval * time,
        stepper=config.stepper.scaled_in_time(time),
    )

    def _shrink(blob: Blob, amplitude: float) -> Blob:
        return Blob(
            amplitude=blob.amplitude * amplitude,
            center=(blob.center[0] / R, blob.center[1] / R),
            width=blob.width / R,
        )

    scaled_ic = InitialConditionSpec(
        n_blobs=tuple(_shrink(b, R**2) for b in ic.n_blobs),
        c_blobs=tuple(_shrink(b, 1.0) for b in ic.c_blobs),
        c_background=ic.c_background,
        u_mode=VelocityMode(ic.u_mode.kind, ic.u_mode.amplitude * R),
    )
    return scaled_config, scaled_ic


def scale_initial_condition(
    ic: InitialConditionSpec, n_factor: float = 1.0, c_factor: float = 1.0
) -> InitialConditionSpec:
    """Multiply the cell and oxygen amplitudes, keeping positions and widths."""
    if not (n_factor >= 0 and c_factor >= 0):
        raise InvalidConfig("amplitude factors must be >= 0")
    return ic.with_n_factor(n_factor).with_c_factor(c_factor)
