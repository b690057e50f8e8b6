"""Refinement studies: spectral-vs-oracle convergence and identity residuals."""

import logging
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ksflow.diagnostics.identities import weighted_identity_residual
from ksflow.diagnostics.weights import WeightSpec
from ksflow.dynamics.state import State
from ksflow.dynamics.stepper import Integrator
from ksflow.dynamics.trajectory import POSITIVITY_FRACTION, Trajectory, run_trajectory
from ksflow.errors import EmptyInput, InvalidConfig, NumericalBreakdown, WrongModel
from ksflow.model.config import ModelConfig
from ksflow.model.initial import InitialConditionSpec, build_initial_state
from ksflow.spectral.grid import GridSpec

from .compare import compare_trajectories
from .oracle import oracle_fd_run

logger = logging.getLogger(__name__)


def refined_grid(grid: GridSpec, factor: int) -> GridSpec:
    return GridSpec(nx=grid.nx * factor, ny=grid.ny * factor, lx=grid.lx, ly=grid.ly)


def _reductions(errors: list[float]) -> list[float]:
    out = [np.nan]
    for coarse, fine in zip(errors, errors[1:]):
        out.append(coarse / fine if fine > 0 else np.inf)
    return out


def restrict_trajectory(traj: Trajectory, grid: GridSpec, factor: int) -> Trajectory:
    """Copy of traj whose samples are injected onto the coarser grid."""
    samples = [
        State.from_arrays(
            grid,
            s.t,
            s.n.values[::factor, ::factor],
            s.c.values[::factor, ::factor],
            s.u.x.values[::factor, ::factor],
            s.u.y.values[::factor, ::factor],
        )
        for s in traj.samples
    ]
    return replace(
        traj,
        config=traj.config.replace(grid=grid),
        samples=samples,
        records=[],
        final_state=samples[-1],
    )


def convergence_study(
    m: ModelConfig, ic: InitialConditionSpec, levels: Sequence[int] = (1, 2)
) -> pd.DataFrame:
    """
    Max-norm difference between the spectral run and oracle runs on refined grids.

    Each oracle grid has factor times the nodes of m.grid; its samples are
    injected back onto m.grid before comparing.

    Args:
        m: Model configuration of the spectral run.
        ic: Initial data.
        levels: Increasing refinement factors of the oracle grid.

    Returns:
        DataFrame with columns factor, nx, dt, difference and reduction
        (previous difference over this one).
    """
    if not levels:
        raise EmptyInput("convergence study needs at least one level")
    spectral = run_trajectory(m, ic)
    if spectral.flagged:
        raise InvalidConfig(f"spectral run ended with {spectral.termination.value}")

    rows = []
    for factor in levels:
        fine = m.replace(grid=refined_grid(m.grid, factor))
        oracle = oracle_fd_run(fine, ic)
        restricted = restrict_trajectory(oracle, m.grid, factor)
        diff = compare_trajectories(spectral, restricted, norm="linf")
        dt = oracle.records[-1].dt if len(oracle.records) > 1 else 0.0
        rows.append(
            {
                "factor": factor,
                "nx": fine.grid.nx,
                "dt": dt,
                "difference": float(diff["max"].max()),
            }
        )
        logger.info("oracle factor %d: difference %.3e", factor, rows[-1]["difference"])

    frame = pd.DataFrame(rows)
    frame["reduction"] = _reductions(frame["difference"].tolist())
    return frame


def _fixed_step_pair(
    m: ModelConfig, ic: InitialConditionSpec, dt: float, t_star: float
) -> tuple[State, State]:
    """
    States at t_star - dt and t_star from fixed steps of size dt.

    Raises NumericalBreakdown when n leaves the same positivity and blow-up
    bounds that flag an adaptive run.
    """
    integrator = Integrator(m)
    state = build_initial_state(m, ic)
    n0_max = max(float(np.max(state.n.values)), 0.0)
    positivity_tol = POSITIVITY_FRACTION * n0_max
    blowup_limit = m.stepper.blowup_factor * n0_max if n0_max > 0 else np.inf
    fields_hat = integrator.load(state)
    count = max(1, int(round(t_star / dt)))
    previous = current = state
    for index in range(count):
        previous = current
        fields_hat = integrator.advance(fields_hat, dt)
        current = integrator.to_state(fields_hat, (index + 1) * dt)
        n = current.n.values
        if not np.all(np.isfinite(n)) or float(np.max(n)) > blowup_limit:
            raise NumericalBreakdown("n blew up", t=current.t, step=index + 1)
        if float(np.min(n)) < -positivity_tol:
            raise NumericalBreakdown(
                f"min n {float(np.min(n)):.3e} below -{positivity_tol:.3e}",
                t=current.t,
                step=index + 1,
            )
    return previous, current


def identity_refinement_study(
    m: ModelConfig,
    ic: InitialConditionSpec,
    levels: int = 3,
    t_star: Optional[float] = None,
    p: float = 2.0,
) -> pd.DataFrame:
    """
    Weighted identity residual at t_star under joint (dt/2, N*2) refinement.

    Level k runs on 2^k times the nodes of m.grid with step dt_init / 2^k and
    a fixed step size.

    Args:
        m: Hyperbolic (mu=0) model configuration.
        ic: Initial data.
        levels: Number of refinement levels.
        t_star: Evaluation time; defaults to t_end.
        p: Weight exponent.

    Returns:
        DataFrame with columns level, nx, dt, residual and reduction.
    """
    if m.mu != 0:
        raise WrongModel("identity refinement needs the hyperbolic model (mu=0)")
    if levels < 1:
        raise EmptyInput("identity refinement needs at least one level")
    t_star = m.t_end if t_star is None else t_star
    if not t_star > 0:
        raise InvalidConfig(f"t_star must be positive, got {t_star}")

    cmax = max(float(np.max(ic.c_field(m.grid))), 0.0)
    weight = WeightSpec.ode(p, cmax)

    rows = []
    for level in range(levels):
        factor = 2**level
        dt = m.stepper.dt_init / factor
        stepper = replace(
            m.stepper,
            dt_init=dt,
            dt_max=dt,
            dt_min=min(m.stepper.dt_min, dt),
            adaptive=False,
        )
        level_m = m.replace(grid=refined_grid(m.grid, factor), stepper=stepper)
        s_prev, s_next = _fixed_step_pair(level_m, ic, dt, t_star)
        residual = weighted_identity_residual(s_prev, s_next, weight, level_m)
        rows.append(
            {"level": level, "nx": level_m.grid.nx, "dt": dt, "residual": residual}
        )
        logger.info("identity level %d: residual %.3e", level, residual)

    frame = pd.DataFrame(rows)
    frame["reduction"] = _reductions(frame["residual"].tolist())
    return frame
