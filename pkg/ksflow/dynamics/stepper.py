"""Integrating-factor IMEX time stepping and step-size control."""

import logging

import numpy as np

from ksflow.errors import DtUnderflow, InvalidConfig, NumericalBreakdown
from ksflow.model.config import Fluid, ModelConfig, Scheme
from ksflow.spectral.grid import GridSpec
from ksflow.spectral.ops import (
    derivative_factor,
    forward_array,
    inverse_array,
    project_coeffs,
)

from .state import State
from .tendencies import (
    C,
    UX,
    UY,
    explicit_terms,
    linear_coefficients,
    stack_state,
    unstack_state,
)

logger = logging.getLogger(__name__)

# Damping of the Nyquist mode per application of the hyperbolic filter.
FILTER_STRENGTH = float(np.log(1e16))
SPEED_FLOOR = 1e-8
# Larger step growth restarts the two-step history.
MAX_STEP_RATIO = 2.0


def spectral_filter(grid: GridSpec, order: int) -> np.ndarray:
    """Exponential filter exp(-a (|m| / m_nyquist)^order) applied per axis."""
    rel_x = np.abs(grid.mode_x) / (grid.nx // 2)
    rel_y = grid.mode_y / (grid.ny // 2)
    return np.outer(
        np.exp(-FILTER_STRENGTH * rel_x**order),
        np.exp(-FILTER_STRENGTH * rel_y**order),
    )


class Integrator:
    """
    Advances stacked spectra of (n, c, ux, uy) with an exact integrating factor.

    Diffusion is integrated exactly through exp(L dt). Explicit terms use
    forward Euler (imex_euler) or a variable-step two-step extrapolation
    (imex_bdf2) that starts with an integrating-factor Heun step. The history
    of the two-step scheme lives on the instance, so one Integrator drives one
    trajectory.
    """

    def __init__(self, model: ModelConfig):
        self.model = model
        self.grid = model.grid
        self.scheme = model.stepper.scheme
        self.linear = linear_coefficients(self.grid, model.mu)
        self.filter = (
            spectral_filter(self.grid, model.stepper.hyperbolic_filter_order)
            if model.mu == 0
            else None
        )
        self._previous: tuple[np.ndarray, float] | None = None

    def reset(self) -> None:
        self._previous = None

    def _propagator(self, dt: float) -> np.ndarray:
        return np.exp(self.linear * dt)

    def _explicit(self, fields_hat: np.ndarray) -> np.ndarray:
        return explicit_terms(self.model, fields_hat)

    def _finish(self, fields_hat: np.ndarray) -> np.ndarray:
        if self.model.fluid is Fluid.NONE:
            fields_hat[UX] = 0.0
            fields_hat[UY] = 0.0
        else:
            fields_hat[UX], fields_hat[UY] = project_coeffs(
                self.grid, fields_hat[UX], fields_hat[UY]
            )
        if self.filter is not None:
            fields_hat[C] = fields_hat[C] * self.filter
        if not np.all(np.isfinite(fields_hat)):
            raise NumericalBreakdown("non-finite state after step")
        return fields_hat

    def advance(self, fields_hat: np.ndarray, dt: float) -> np.ndarray:
        """Return the spectra one step of length dt later."""
        propagator = self._propagator(dt)
        explicit = self._explicit(fields_hat)

        if self.scheme is Scheme.IMEX_EULER:
            updated = propagator * (fields_hat + dt * explicit)
        elif self._previous is None or dt > MAX_STEP_RATIO * self._previous[1]:
            logger.debug("starting two-step history with a Heun step, dt=%.3e", dt)
            predictor = propagator * (fields_hat + dt * explicit)
            updated = propagator * fields_hat + 0.5 * dt * (
                propagator * explicit + self._explicit(predictor)
            )
        else:
            previous, dt_prev = self._previous
            ratio = dt / dt_prev
            updated = propagator * fields_hat + dt * (
                (1.0 + 0.5 * ratio) * propagator * explicit
                - 0.5 * ratio * self._propagator(dt + dt_prev) * previous
            )

        self._previous = (explicit, dt)
        return self._finish(updated)

    def load(self, state: State) -> np.ndarray:
        self.reset()
        return stack_state(state)

    def to_state(self, fields_hat: np.ndarray, t: float) -> State:
        return unstack_state(self.grid, t, fields_hat)


def _check_dt(m: ModelConfig, dt: float) -> None:
    stepper = m.stepper
    if not np.isfinite(dt) or dt <= 0:
        raise InvalidConfig(f"time step must be positive, got {dt}")
    if dt < stepper.dt_min:
        raise DtUnderflow(dt, stepper.dt_min)
    if dt > stepper.dt_max * (1 + 1e-12):
        raise InvalidConfig(f"time step {dt} exceeds dt_max {stepper.dt_max}")


def step(s: State, m: ModelConfig, dt: float) -> State:
    """
    Advance a state by one self-starting step.

    Raises:
        DtUnderflow: dt below dt_min.
        NumericalBreakdown: the step produced NaN.
    """
    _check_dt(m, dt)
    integrator = Integrator(m)
    fields_hat = integrator.load(s)
    try:
        advanced = integrator.advance(fields_hat, dt)
    except NumericalBreakdown as exc:
        raise NumericalBreakdown(str(exc), t=s.t) from exc
    return integrator.to_state(advanced, s.t + dt)


def characteristic_speed(s: State, m: ModelConfig) -> float:
    """max(|u| + chi(c) |grad c|) over the grid plus a small floor."""
    grid = m.grid
    c_hat = forward_array(s.c.values)
    cx = inverse_array(derivative_factor(grid, "x", 1) * c_hat, grid)
    cy = inverse_array(derivative_factor(grid, "y", 1) * c_hat, grid)
    chi = np.abs(m.sensitivity.chi(s.c.values))
    speed = s.u.magnitude() + chi * np.hypot(cx, cy)
    return float(np.max(speed)) + SPEED_FLOOR


def adapt_dt(s: State, m: ModelConfig) -> float:
    """
    Stable step cfl_safety * h / V clamped to [dt_min, dt_max].

    Raises:
        DtUnderflow: the unclamped step is below dt_min.
    """
    stepper = m.stepper
    dt = stepper.cfl_safety * m.grid.h / characteristic_speed(s, m)
    if dt < stepper.dt_min:
        raise DtUnderflow(dt, stepper.dt_min)
    return min(dt, stepper.dt_max)
