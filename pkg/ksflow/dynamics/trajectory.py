"""Run loop producing sampled trajectories with per-step diagnostics."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ksflow.diagnostics.records import DiagnosticsRecord, compute_record, records_frame
from ksflow.diagnostics.weights import WeightSpec
from ksflow.errors import DtUnderflow, NumericalBreakdown
from ksflow.model.assumptions import chi_sup
from ksflow.model.config import ModelConfig
from ksflow.model.initial import InitialConditionSpec, build_initial_state

from .state import State
from .stepper import Integrator, adapt_dt

logger = logging.getLogger(__name__)

POSITIVITY_FRACTION = 1e-8


class Termination(str, Enum):
    COMPLETED = "completed"
    FLAGGED_BLOWUP = "flagged_blowup"
    FLAGGED_NEGATIVE = "flagged_negative"
    DT_UNDERFLOW = "dt_underflow"


@dataclass
class Trajectory:
    """
    Sampled states and per-step records of one run.

    samples hold accepted states at multiples of sample_interval, starting at
    t = 0. records hold one DiagnosticsRecord per accepted step, including the
    initial state. A state rejected by the run loop is kept in rejected_state
    with its flag set and never enters samples or records.
    """

    config: ModelConfig
    initial: Optional[InitialConditionSpec]
    weight: WeightSpec
    samples: list[State] = field(default_factory=list)
    records: list[DiagnosticsRecord] = field(default_factory=list)
    termination: Termination = Termination.COMPLETED
    positivity_tol: float = 0.0
    steps: int = 0
    final_state: Optional[State] = None
    rejected_state: Optional[State] = None

    @property
    def flagged(self) -> bool:
        return self.termination is not Termination.COMPLETED

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def t_final(self) -> float:
        return self.final_state.t if self.final_state is not None else 0.0

    def records_frame(self) -> pd.DataFrame:
        return records_frame(self.records)


def default_weight(m: ModelConfig, initial: State, p: float = 2.0) -> WeightSpec:
    """Gaussian formula weight for mu=1, ode weight for mu=0."""
    cmax = max(float(np.max(initial.c.values)), 0.0)
    if m.mu == 1:
        return WeightSpec.from_formula(p, chi_sup(m, cmax), cmax)
    return WeightSpec.ode(p, cmax)


def sample_times(m: ModelConfig) -> np.ndarray:
    """Positive multiples of sample_interval up to t_end."""
    if m.t_end == 0:
        return np.empty(0)
    count = int(np.floor(m.t_end / m.sample_interval * (1 + 1e-12)))
    return np.arange(1, count + 1) * m.sample_interval


def run_trajectory(
    m: ModelConfig,
    ic: Optional[InitialConditionSpec],
    weight: Optional[WeightSpec] = None,
    progress_callback: Optional[Callable[[float, float], None]] = None,
    initial_state: Optional[State] = None,
) -> Trajectory:
    """
    Integrate from the initial data to t_end.

    Steps are shortened to land exactly on sample times and on t_end; such
    alignment steps may fall below dt_min. Numerical failures end the run with
    a termination flag instead of raising.

    Args:
        m: Model configuration.
        ic: Initial data; ignored when initial_state is given.
        weight: Weight for the weighted-energy column; chosen from mu if omitted.
        progress_callback: Called as progress_callback(t, t_end) after each step.
        initial_state: Restart state; integration starts at its time.

    Returns:
        Trajectory with samples, records and termination flag.
    """
    state = initial_state if initial_state is not None else build_initial_state(m, ic)
    weight = weight or default_weight(m, state)

    n0_max = max(float(np.max(state.n.values)), 0.0)
    positivity_tol = POSITIVITY_FRACTION * n0_max
    blowup_limit = m.stepper.blowup_factor * n0_max if n0_max > 0 else np.inf

    traj = Trajectory(
        config=m,
        initial=ic,
        weight=weight,
        samples=[state],
        records=[compute_record(state, m, weight, 0.0)],
        positivity_tol=positivity_tol,
        final_state=state,
    )

    targets = sample_times(m)
    targets = targets[targets > state.t * (1 + 1e-12) + 1e-300]
    if m.t_end > 0 and (len(targets) == 0 or targets[-1] < m.t_end):
        if m.t_end > state.t:
            targets = np.append(targets, m.t_end)
    sample_set = set(sample_times(m).tolist())

    integrator = Integrator(m)
    fields_hat = integrator.load(state)
    t = state.t
    stepper = m.stepper

    for target in targets:
        while t < target:
            try:
                dt = adapt_dt(state, m) if stepper.adaptive else stepper.dt_init
            except DtUnderflow as exc:
                logger.warning("Run stopped at t=%.6g: %s", t, exc)
                traj.termination = Termination.DT_UNDERFLOW
                return traj

            # merge a would-be sliver into this step
            hit = t + dt * (1 + 1e-6) >= target
            if hit:
                dt = target - t

            try:
                fields_hat = integrator.advance(fields_hat, dt)
            except NumericalBreakdown as exc:
                logger.warning(
                    "Run stopped at t=%.6g, step %d: %s", t, traj.steps + 1, exc
                )
                traj.termination = Termination.FLAGGED_BLOWUP
                return traj

            t = float(target) if hit else t + dt
            state = integrator.to_state(fields_hat, t)
            traj.steps += 1

            n_min = float(np.min(state.n.values))
            n_max = float(np.max(state.n.values))
            if n_max > blowup_limit:
                logger.warning(
                    "max n %.3e exceeds %.3e at t=%.6g", n_max, blowup_limit, t
                )
                traj.termination = Termination.FLAGGED_BLOWUP
                traj.rejected_state = state.mark_flagged()
                return traj
            if n_min < -positivity_tol:
                logger.warning(
                    "min n %.3e below -%.3e at t=%.6g", n_min, positivity_tol, t
                )
                traj.termination = Termination.FLAGGED_NEGATIVE
                traj.rejected_state = state.mark_flagged()
                return traj

            traj.records.append(compute_record(state, m, weight, dt))
            traj.final_state = state
            logger.debug("step %d t=%.6g dt=%.3e", traj.steps, t, dt)
            if progress_callback is not None:
                progress_callback(t, m.t_end)

        if float(target) in sample_set:
            traj.samples.append(state)

    return traj
