"""Scripted studies: scaling pairs, threshold sweeps and the FD oracle."""

from .compare import compare_trajectories
from .oracle import oracle_fd_run
from .scaling import ScalingReport, run_scaling_pair
from .studies import convergence_study, identity_refinement_study
from .sweep import (
    SWEEP_PARAMETERS,
    SweepOutcome,
    SweepReport,
    SweepSettings,
    threshold_sweep,
)

__all__ = [
    "SWEEP_PARAMETERS",
    "ScalingReport",
    "SweepOutcome",
    "SweepReport",
    "SweepSettings",
    "compare_trajectories",
    "convergence_study",
    "identity_refinement_study",
    "oracle_fd_run",
    "run_scaling_pair",
    "threshold_sweep",
]
