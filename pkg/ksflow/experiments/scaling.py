"""Scaling-invariance check of the critical mixed norm."""

import logging
from dataclasses import dataclass

from ksflow.diagnostics.criteria import MixedNormSpec, mixed_norm_integral
from ksflow.dynamics.trajectory import Trajectory, run_trajectory
from ksflow.errors import ScaledRunFailed
from ksflow.model.config import ModelConfig
from ksflow.model.initial import InitialConditionSpec
from ksflow.model.scaling import scaled_problem

logger = logging.getLogger(__name__)

CRITICAL_PAIR = MixedNormSpec(p=2.0, q=2.0, d=2)


@dataclass(frozen=True)
class ScalingReport:
    R: float
    base_value: float
    scaled_value: float
    relative_difference: float
    base_mass: float
    scaled_mass: float
    mass_relative_difference: float


def relative_difference(a: float, b: float) -> float:
    """|a - b| / max(|a|, |b|), or 0 when both vanish."""
    scale = max(abs(a), abs(b))
    if scale == 0:
        return 0.0
    return abs(a - b) / scale


def _checked_run(m: ModelConfig, ic: InitialConditionSpec, label: str) -> Trajectory:
    traj = run_trajectory(m, ic)
    if traj.flagged:
        raise ScaledRunFailed(
            f"{label} run ended with {traj.termination.value} at t={traj.t_final:.6g}"
        )
    return traj


def run_scaling_pair(
    m: ModelConfig, ic: InitialConditionSpec, R: float
) -> ScalingReport:
    """
    Run a problem and its R-rescaled version and compare the L^2_t L^2_x integral of n.

    Both runs use the same node count, so points per feature match.

    Args:
        m: Base model configuration.
        ic: Base initial data.
        R: Positive scale factor.

    Returns:
        ScalingReport with the two integrals and the initial masses.

    Raises:
        ScaledRunFailed: either run ends with a termination flag.
    """
    scaled_m, scaled_ic = scaled_problem(m, ic, R)
    logger.info("Scaling pair R=%g: box %g -> %g", R, m.grid.lx, scaled_m.grid.lx)

    base = _checked_run(m, ic, "base")
    scaled = _checked_run(scaled_m, scaled_ic, "scaled")

    base_value = mixed_norm_integral(base, CRITICAL_PAIR).value
    scaled_value = mixed_norm_integral(scaled, CRITICAL_PAIR).value
    base_mass = base.samples[0].n.integral()
    scaled_mass = scaled.samples[0].n.integral()

    return ScalingReport(
        R=float(R),
        base_value=base_value,
        scaled_value=scaled_value,
        relative_difference=relative_difference(base_value, scaled_value),
        base_mass=base_mass,
        scaled_mass=scaled_mass,
        mass_relative_difference=relative_difference(base_mass, scaled_mass),
    )
