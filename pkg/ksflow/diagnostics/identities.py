"""Discrete residuals of the weighted and truncated energy equalities."""

from typing import TYPE_CHECKING

import numpy as np

from ksflow.errors import InvalidSeries, OutOfDomain, WrongModel
from ksflow.model.config import ModelConfig
from ksflow.model.sensitivity import SensitivitySpec
from ksflow.spectral.ops import derivative_factor, forward_array, inverse_array

from .norms import require_unflagged
from .weights import WeightSpec, weight_ode

if TYPE_CHECKING:
    from ksflow.dynamics.state import State


def _energy_terms(
    s: "State", p: float, sens: SensitivitySpec, K: float
) -> tuple[float, float, float]:
    """
    Energy, dissipation and source of the truncated equality at one state.

    With G = n/phi and w = (G - K)+ the equality reads
    d/dt int w^p phi + 4(p-1)/p int phi |grad w^(p/2)|^2 = source, where
    source = (p-1) int w^(p+1) phi^2 chi k + (2p-1) K int phi^2 chi k w^p
             + p K^2 int phi^2 chi k w^(p-1).
    K = 0 recovers the untruncated weighted equality.
    """
    grid = s.grid
    c = s.c.values
    phi = weight_ode(c, sens)
    ratio = s.n.values / phi
    w = np.maximum(np.maximum(ratio, 0.0) - K, 0.0)
    active = w > 0.0

    ratio_hat = forward_array(ratio)
    gx = inverse_array(derivative_factor(grid, "x", 1) * ratio_hat, grid)
    gy = inverse_array(derivative_factor(grid, "y", 1) * ratio_hat, grid)
    # grad w^(p/2) = (p/2) w^(p/2 - 1) grad G on the active set
    grad_sq = np.where(active, (0.5 * p) ** 2 * w ** (p - 2.0) * (gx**2 + gy**2), 0.0)

    area = grid.cell_area
    energy = float(np.sum(w**p * phi) * area)
    dissipation = float(4.0 * (p - 1.0) / p * np.sum(phi * grad_sq) * area)

    rate = phi**2 * sens.chi(c) * sens.k(c)
    source = (p - 1.0) * np.sum(rate * w ** (p + 1.0))
    if K > 0.0:
        source += (2.0 * p - 1.0) * K * np.sum(rate * w**p)
        source += p * K**2 * np.sum(np.where(active, rate * w ** (p - 1.0), 0.0))
    return energy, dissipation, float(source * area)


def _pair_residual(
    s_prev: "State", s_next: "State", w: WeightSpec, m: ModelConfig, K: float
) -> float:
    if m.mu != 0:
        raise WrongModel(
            "energy equalities hold for the hyperbolic oxygen equation (mu=0)"
        )
    if w.gaussian:
        raise WrongModel("energy equalities use the ode weight phi' = phi chi")
    require_unflagged(s_prev)
    require_unflagged(s_next)
    dt = s_next.t - s_prev.t
    if not dt > 0:
        raise InvalidSeries(f"states must be ordered in time, got dt={dt}")

    sens = m.sensitivity
    e0, d0, r0 = _energy_terms(s_prev, w.p, sens, K)
    e1, d1, r1 = _energy_terms(s_next, w.p, sens, K)
    rate = (e1 - e0) / dt
    dissipation = 0.5 * (d0 + d1)
    source = 0.5 * (r0 + r1)
    scale = max(abs(rate), abs(dissipation), abs(source))
    if scale == 0.0:
        return 0.0
    return abs(rate + dissipation - source) / scale


def weighted_identity_residual(
    s_prev: "State", s_next: "State", w: WeightSpec, m: ModelConfig
) -> float:
    """
    Relative residual of the weighted energy equality between two states.

    The energy int (n/phi)^p phi is differenced in time; dissipation and source
    are averaged over the two states. The result is normalized by the largest
    of the three terms and is 0 for a zero state.

    Raises:
        WrongModel: m is parabolic (mu=1) or w is not the ode weight.
    """
    return _pair_residual(s_prev, s_next, w, m, 0.0)


def truncated_energy(
    s: "State", w: WeightSpec, K: float, sens: SensitivitySpec
) -> float:
    """Integral of (n/phi - K)+^p phi with the ode weight."""
    require_unflagged(s)
    if np.isnan(K):
        raise OutOfDomain(f"truncation level must be a number, got {K}")
    if K < 0:
        raise OutOfDomain(f"truncation level must be >= 0, got {K}")
    if K == np.inf:
        return 0.0
    phi = weight_ode(s.c.values, sens)
    ratio = np.maximum(s.n.values, 0.0) / phi
    excess = np.maximum(ratio - K, 0.0)
    return float(np.sum(excess**w.p * phi) * s.grid.cell_area)


def truncated_identity_residual(
    s_prev: "State", s_next: "State", w: WeightSpec, K: float, m: ModelConfig
) -> float:
    """Relative residual of the truncated energy equality at level K."""
    if not K >= 0:
        raise OutOfDomain(f"truncation level must be >= 0, got {K}")
    return _pair_residual(s_prev, s_next, w, m, float(K))
