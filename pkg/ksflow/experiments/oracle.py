"""Independent finite-difference solver used to cross-check the spectral path."""

import logging

import numpy as np

from ksflow.diagnostics.records import compute_record
from ksflow.dynamics.state import State
from ksflow.dynamics.trajectory import (
    Termination,
    Trajectory,
    default_weight,
    sample_times,
)
from ksflow.errors import DtUnderflow
from ksflow.model.config import Fluid, ModelConfig
from ksflow.model.initial import InitialConditionSpec, build_initial_state
from ksflow.spectral.grid import GridSpec

logger = logging.getLogger(__name__)

PARABOLIC_LIMIT = 0.2


class FiniteDifferenceOperators:
    """Second-order centered differences on the periodic grid."""

    def __init__(self, grid: GridSpec):
        self.hx = grid.hx
        self.hy = grid.hy
        i = np.arange(grid.nx)
        j = np.arange(grid.ny)
        # eigenvalues of the 5-point Laplacian for the FFT Poisson solve
        ex = 2.0 * (np.cos(2.0 * np.pi * i / grid.nx) - 1.0) / self.hx**2
        ey = 2.0 * (np.cos(2.0 * np.pi * j / grid.ny) - 1.0) / self.hy**2
        self.eigen = ex[:, None] + ey[None, :]
        self.eigen[0, 0] = 1.0

    def ddx(self, f: np.ndarray) -> np.ndarray:
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * self.hx)

    def ddy(self, f: np.ndarray) -> np.ndarray:
        return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2.0 * self.hy)

    def lap(self, f: np.ndarray) -> np.ndarray:
        xx = np.roll(f, -1, axis=0) - 2.0 * f + np.roll(f, 1, axis=0)
        yy = np.roll(f, -1, axis=1) - 2.0 * f + np.roll(f, 1, axis=1)
        return xx / self.hx**2 + yy / self.hy**2

    def poisson(self, rhs: np.ndarray) -> np.ndarray:
        """Mean-zero solution of the discrete Laplace equation lap(psi) = rhs."""
        coeffs = np.fft.fft2(rhs) / self.eigen
        coeffs[0, 0] = 0.0
        return np.real(np.fft.ifft2(coeffs))


def _velocity(ops: FiniteDifferenceOperators, omega: np.ndarray):
    psi = ops.poisson(-omega)
    return ops.ddy(psi), -ops.ddx(psi)


def oracle_fd_run(m: ModelConfig, ic: InitialConditionSpec) -> Trajectory:
    """
    Explicit Euler, centered-difference run of the same problem.

    Starts from the dealiased initial state of the spectral run. The fluid is
    advanced in vorticity-streamfunction form. The step is min(dt_init, 0.2 h^2),
    shortened to land on sample times.

    Raises:
        DtUnderflow: the explicit step violates the advective limit h / V.
    """
    grid = m.grid
    ops = FiniteDifferenceOperators(grid)
    sens = m.sensitivity
    gx, gy = m.grad_phi

    start = build_initial_state(m, ic)
    n = start.n.values
    c = start.c.values
    if m.fluid is Fluid.NONE:
        omega = np.zeros(grid.shape)
        ux = np.zeros(grid.shape)
        uy = np.zeros(grid.shape)
    else:
        omega = ops.ddx(start.u.y.values) - ops.ddy(start.u.x.values)
        ux, uy = _velocity(ops, omega)

    state = State.from_arrays(grid, 0.0, n, c, ux, uy)
    weight = default_weight(m, state)
    traj = Trajectory(
        config=m,
        initial=ic,
        weight=weight,
        samples=[state],
        records=[compute_record(state, m, weight, 0.0)],
        final_state=state,
    )

    dt_base = min(m.stepper.dt_init, PARABOLIC_LIMIT * grid.h**2)
    samples = sample_times(m)
    targets = samples
    if m.t_end > 0 and (len(samples) == 0 or samples[-1] < m.t_end):
        targets = np.append(samples, m.t_end)
    sample_set = set(samples.tolist())

    t = 0.0
    for target in targets:
        while t < target:
            cx, cy = ops.ddx(c), ops.ddy(c)
            drift_speed = np.abs(sens.chi(c)) * np.hypot(cx, cy)
            speed = float(np.max(np.hypot(ux, uy) + drift_speed))
            if speed * dt_base > grid.h:
                raise DtUnderflow(grid.h / speed, dt_base)

            hit = t + dt_base * (1 + 1e-6) >= target
            dt = target - t if hit else dt_base

            drift = sens.chi(c) * n
            flux_x = ux * n + drift * cx
            flux_y = uy * n + drift * cy
            dn = -ops.ddx(flux_x) - ops.ddy(flux_y) + ops.lap(n)
            dc = -(ux * cx + uy * cy) + m.mu * ops.lap(c) - sens.k(c) * n
            if m.fluid is Fluid.NONE:
                domega = 0.0
            else:
                # curl of the force -n grad(phi)
                domega = ops.lap(omega) - (gy * ops.ddx(n) - gx * ops.ddy(n))
                if m.fluid is Fluid.NAVIER_STOKES:
                    domega = domega - (ux * ops.ddx(omega) + uy * ops.ddy(omega))

            n = n + dt * dn
            c = c + dt * dc
            if m.fluid is not Fluid.NONE:
                omega = omega + dt * domega
                ux, uy = _velocity(ops, omega)
            t = float(target) if hit else t + dt

            if not (np.all(np.isfinite(n)) and np.all(np.isfinite(c))):
                logger.warning("Oracle run produced non-finite values at t=%.6g", t)
                traj.termination = Termination.FLAGGED_BLOWUP
                return traj

            state = State.from_arrays(grid, t, n, c, ux, uy)
            traj.steps += 1
            traj.records.append(compute_record(state, m, weight, dt))
            traj.final_state = state
        if float(target) in sample_set:
            traj.samples.append(state)

    return traj
