"""Level-set energies U(xi), U'(xi), E(xi) over sampled trajectories."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np

from ksflow.errors import EmptyInput, InvalidConfig, StaleState
from ksflow.model.sensitivity import SensitivitySpec
from ksflow.spectral.ops import derivative_factor, forward_array, inverse_array

from .weights import WeightSpec, weight_gauss

if TYPE_CHECKING:
    from ksflow.dynamics.state import State
    from ksflow.dynamics.trajectory import Trajectory

Variant = Literal["n", "n_plus_c", "n_over_phi"]
VARIANTS = ("n", "n_plus_c", "n_over_phi")
SUP_GRID_POINTS = 10_000


@dataclass(frozen=True)
class LevelSetSpec:
    """
    Auxiliary functions nu(t) = (1+t)^nu_exponent, eta(t) = (1+t)^eta_exponent
    and the grid of levels xi at which the energies are evaluated. Profiles
    are truncated to (G - K)+ before their excess over xi eta(t) is taken.
    """

    nu_exponent: float
    eta_exponent: float
    xi_grid: tuple[float, ...]
    p: float = 2.0
    K: float = 0.0
    d: int = 2

    def __post_init__(self):
        grid = tuple(float(x) for x in self.xi_grid)
        object.__setattr__(self, "xi_grid", grid)
        if grid and (min(grid) <= 0 or any(b <= a for a, b in zip(grid, grid[1:]))):
            raise InvalidConfig("xi grid must be positive and strictly increasing")
        if not self.p >= 2:
            raise InvalidConfig(f"level-set exponent must be >= 2, got {self.p}")
        if self.K < 0:
            raise InvalidConfig(f"truncation level must be >= 0, got {self.K}")

    @classmethod
    def parabolic(cls, xi_grid, p: float = 2.0, d: int = 2) -> "LevelSetSpec":
        """nu = (1+t)^-1, eta = (1+t)^(-d/4)."""
        return cls(
            nu_exponent=-1.0, eta_exponent=-d / 4.0, xi_grid=tuple(xi_grid), p=p, d=d
        )

    @classmethod
    def hyperbolic(
        cls, xi_grid, p: float = 2.0, d: int = 2, choice: str = "relaxed"
    ) -> "LevelSetSpec":
        """
        Auxiliary functions for the hyperbolic oxygen equation.

        "relaxed" takes nu = eta = (1+t)^-1. "first" takes nu = (1+t)^(1 - d/(2p))
        and eta = (1+t)^-1, which needs p > (d+2)/2.
        """
        if choice == "relaxed":
            return cls(-1.0, -1.0, tuple(xi_grid), p=p, d=d)
        if choice == "first":
            if not p > (d + 2) / 2:
                raise InvalidConfig(f"choice 'first' needs p > {(d + 2) / 2}, got {p}")
            return cls(1.0 - d / (2.0 * p), -1.0, tuple(xi_grid), p=p, d=d)
        raise InvalidConfig(f"unknown auxiliary-function choice {choice!r}")

    def nu(self, t):
        return (1.0 + np.asarray(t)) ** self.nu_exponent

    def eta(self, t):
        return (1.0 + np.asarray(t)) ** self.eta_exponent

    @property
    def q(self) -> float:
        return 2.0 * (self.d + 2) / self.d

    @property
    def exponents(self) -> dict[str, float]:
        d, p = self.d, self.p
        return {
            "q": self.q,
            "alpha_parabolic": 4.0 / (4.0 + d),
            "theta_parabolic": (d + 2.0) / (d + 4.0),
            "alpha_hyperbolic": 2.0 * p / (d + 2.0 * p),
            "theta_hyperbolic": (d + 2.0) / (d + 2.0 * p),
        }


def xi0(state: "State", ls: LevelSetSpec) -> float:
    """max(|n0|_inf, |c0|_inf) / eta(0)."""
    top = max(
        float(np.max(np.abs(state.n.values))), float(np.max(np.abs(state.c.values)))
    )
    return top / float(ls.eta(state.t))


def xi_grid_from(
    xi_start: float, factor_max: float = 100.0, count: int = 50
) -> tuple[float, ...]:
    """Geometric grid from xi_start to factor_max * xi_start."""
    if not xi_start > 0:
        raise InvalidConfig(f"xi grid needs a positive start, got {xi_start}")
    return tuple(float(x) for x in xi_start * np.geomspace(1.0, factor_max, count))


def _samples(traj: "Trajectory", ls: LevelSetSpec):
    if not ls.xi_grid:
        raise EmptyInput("level-set grid is empty")
    if not traj.samples:
        raise EmptyInput("trajectory holds no samples")
    if any(s.flagged for s in traj.samples):
        raise StaleState("trajectory contains flagged samples")
    return traj.samples


def _resolve_variant(traj: "Trajectory", variant: Variant | None) -> str:
    if variant is None:
        return "n" if traj.config.mu == 1 else "n_over_phi"
    if variant not in VARIANTS:
        raise InvalidConfig(f"unknown level-set variant {variant!r}")
    return variant


def _profiles(
    s: "State", variant: str, w: WeightSpec, sens: SensitivitySpec, K: float = 0.0
) -> list[np.ndarray]:
    """Functions (G - K)+ whose excess over xi eta(t) is measured."""
    if variant == "n_over_phi":
        profiles = [np.maximum(s.n.values, 0.0) / w.evaluate(s.c.values, sens)]
    else:
        profiles = [np.maximum(s.n.values, 0.0)]
        if variant == "n_plus_c":
            profiles.append(s.c.values)
    return [np.maximum(g - K, 0.0) for g in profiles]


def _excess(profile: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """(profile - level)+ for every level, shape (levels, points)."""
    return np.maximum(profile.reshape(1, -1) - levels.reshape(-1, 1), 0.0)


def _trapezoid(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    if len(times) < 2:
        return np.zeros(values.shape[1])
    return np.trapezoid(values, times, axis=0)


def level_set_U(
    traj: "Trajectory", ls: LevelSetSpec, w: WeightSpec, variant: Variant | None = None
) -> list[tuple[float, float]]:
    """
    U(xi) = int_0^T nu(t) int (G(t) - xi eta(t))+^p dx dt for each xi.

    G is n, n with the matching c-term added, or n/phi; the default follows
    the model (n for mu=1, n/phi for mu=0).

    Returns:
        List of (xi, U(xi)) pairs in grid order.
    """
    samples = _samples(traj, ls)
    variant = _resolve_variant(traj, variant)
    sens = traj.config.sensitivity
    xi = np.asarray(ls.xi_grid)
    times = np.array([s.t for s in samples])

    per_sample = np.empty((len(samples), len(xi)))
    for i, s in enumerate(samples):
        levels = xi * ls.eta(s.t)
        total = np.zeros(len(xi))
        for profile in _profiles(s, variant, w, sens, ls.K):
            total += np.sum(_excess(profile, levels) ** ls.p, axis=1)
        per_sample[i] = ls.nu(s.t) * total * s.grid.cell_area

    values = _trapezoid(per_sample, times)
    return [(float(a), float(b)) for a, b in zip(xi, values)]


def level_set_dU(
    traj: "Trajectory", ls: LevelSetSpec, w: WeightSpec, variant: Variant | None = None
) -> list[tuple[float, float]]:
    """U'(xi) = -p int_0^T nu eta int (G - xi eta)+^(p-1) dx dt."""
    samples = _samples(traj, ls)
    variant = _resolve_variant(traj, variant)
    sens = traj.config.sensitivity
    xi = np.asarray(ls.xi_grid)
    times = np.array([s.t for s in samples])

    per_sample = np.empty((len(samples), len(xi)))
    for i, s in enumerate(samples):
        eta = ls.eta(s.t)
        total = np.zeros(len(xi))
        for profile in _profiles(s, variant, w, sens, ls.K):
            excess = _excess(profile, xi * eta)
            total += np.sum(np.where(excess > 0, excess ** (ls.p - 1.0), 0.0), axis=1)
        per_sample[i] = -ls.p * ls.nu(s.t) * eta * total * s.grid.cell_area

    values = _trapezoid(per_sample, times)
    return [(float(a), float(b)) for a, b in zip(xi, values)]


def level_set_E(
    traj: "Trajectory", ls: LevelSetSpec, w: WeightSpec, variant: Variant | None = None
) -> list[tuple[float, float]]:
    """
    E(xi) = sup_t int (G - xi eta)+^p
           + 2(p-1)/p int_0^T int |grad (G - xi eta)+^(p/2)|^2.
    """
    samples = _samples(traj, ls)
    variant = _resolve_variant(traj, variant)
    sens = traj.config.sensitivity
    xi = np.asarray(ls.xi_grid)
    times = np.array([s.t for s in samples])
    p = ls.p

    peak = np.zeros(len(xi))
    gradient_terms = np.empty((len(samples), len(xi)))
    for i, s in enumerate(samples):
        grid = s.grid
        levels = xi * ls.eta(s.t)
        energy = np.zeros(len(xi))
        gradient_energy = np.zeros(len(xi))
        for profile in _profiles(s, variant, w, sens, ls.K):
            excess = _excess(profile, levels)
            energy += np.sum(excess**p, axis=1) * grid.cell_area

            profile_hat = forward_array(profile)
            gx = inverse_array(derivative_factor(grid, "x", 1) * profile_hat, grid)
            gy = inverse_array(derivative_factor(grid, "y", 1) * profile_hat, grid)
            grad_sq = (gx**2 + gy**2).reshape(1, -1)
            chain = np.where(excess > 0, (0.5 * p) ** 2 * excess ** (p - 2.0), 0.0)
            gradient_energy += np.sum(chain * grad_sq, axis=1) * grid.cell_area
        peak = np.maximum(peak, energy)
        gradient_terms[i] = gradient_energy

    values = peak + 2.0 * (p - 1.0) / p * _trapezoid(gradient_terms, times)
    return [(float(a), float(b)) for a, b in zip(xi, values)]


def level_set_constants(
    traj: "Trajectory",
    ls: LevelSetSpec,
    w: WeightSpec,
    sens: SensitivitySpec | None = None,
    cmax: float | None = None,
) -> dict[str, float]:
    """
    Constants reported alongside the level-set energies.

    Returns:
        Dictionary with:
        - K1: sup over the xi grid and samples of xi * eta(t)
        - L: grid sup over [0, cmax] of phi chi^2 + chi phi' for the Gaussian weight
        - q, alpha/theta for both auxiliary-function families
    """
    samples = _samples(traj, ls)
    sens = sens or traj.config.sensitivity
    if cmax is None:
        cmax = float(np.max(samples[0].c.values))
    cmax = max(cmax, 0.0)

    eta_max = max(float(ls.eta(s.t)) for s in samples)
    k1 = max(ls.xi_grid) * eta_max

    c = np.linspace(0.0, cmax, SUP_GRID_POINTS)
    phi = weight_gauss(c, w.beta)
    phi_prime = 2.0 * w.beta**2 * c * phi
    chi = sens.chi(c)
    big_l = float(np.max(phi * chi**2 + chi * phi_prime))

    return {"K1": float(k1), "L": big_l, **ls.exponents}
