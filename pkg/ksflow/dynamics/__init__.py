"""Tendencies, time stepping and trajectories."""

from ksflow.model.config import Scheme, StepperConfig

from .state import State
from .stepper import Integrator, adapt_dt, characteristic_speed, spectral_filter, step
from .tendencies import Tendencies, compute_tendencies
from .trajectory import (
    Termination,
    Trajectory,
    default_weight,
    run_trajectory,
    sample_times,
)

__all__ = [
    "Integrator",
    "Scheme",
    "State",
    "StepperConfig",
    "Tendencies",
    "Termination",
    "Trajectory",
    "adapt_dt",
    "characteristic_speed",
    "compute_tendencies",
    "default_weight",
    "run_trajectory",
    "sample_times",
    "spectral_filter",
    "step",
]
