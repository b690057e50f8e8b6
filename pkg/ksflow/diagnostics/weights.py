"""Oxygen-dependent weights and the weighted L^p energy."""

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from ksflow.errors import InvalidConfig, InvalidExponent
from ksflow.model.sensitivity import SensitivitySpec
from ksflow.spectral.grid import GridSpec

from .norms import require_unflagged

if TYPE_CHECKING:
    from ksflow.dynamics.state import State


class WeightSource(str, Enum):
    """
    How the weight phi(c) is defined.

    formula and manual give the Gaussian weight exp((beta c)^2), with beta
    derived from chi or set by hand. ode gives exp(int_0^c chi), the solution
    of phi' = phi chi with phi(0) = 1.
    """

    FORMULA = "formula"
    MANUAL = "manual"
    ODE = "ode"


def formula_beta(p: float, chi1: float) -> float:
    """beta with beta^2 = 6 p (p - 1) chi1^2."""
    return float(np.sqrt(6.0 * p * (p - 1.0)) * chi1)


@dataclass(frozen=True)
class WeightSpec:
    p: float = 2.0
    beta: float = 0.0
    source: WeightSource = WeightSource.FORMULA
    cmax: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "source", WeightSource(self.source))
        if not self.p >= 2:
            raise InvalidExponent(f"weight exponent must be >= 2, got {self.p}")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise InvalidConfig(f"beta must be >= 0, got {self.beta}")

    @classmethod
    def from_formula(cls, p: float, chi1: float, cmax: float) -> "WeightSpec":
        return cls(
            p=p, beta=formula_beta(p, chi1), source=WeightSource.FORMULA, cmax=cmax
        )

    @classmethod
    def manual(cls, p: float, beta: float, cmax: float = 0.0) -> "WeightSpec":
        return cls(p=p, beta=beta, source=WeightSource.MANUAL, cmax=cmax)

    @classmethod
    def ode(cls, p: float = 2.0, cmax: float = 0.0) -> "WeightSpec":
        return cls(p=p, beta=0.0, source=WeightSource.ODE, cmax=cmax)

    @property
    def gaussian(self) -> bool:
        return self.source is not WeightSource.ODE

    def evaluate(self, c, sens: SensitivitySpec):
        if self.gaussian:
            return weight_gauss(c, self.beta)
        return weight_ode(c, sens)


def weight_gauss(c, beta: float):
    return np.exp((beta * np.asarray(c)) ** 2)


def weight_ode(c, sens: SensitivitySpec):
    """exp of the integral of chi from 0 to c."""
    return np.exp(sens.chi_integral(np.asarray(c)))


def weighted_values(
    n: np.ndarray, c: np.ndarray, grid: GridSpec, w: WeightSpec, sens: SensitivitySpec
) -> float:
    """
    Weighted energy of raw arrays.

    Gaussian weights give int n+^p phi; the ode weight gives int (n+/phi)^p phi.
    """
    phi = w.evaluate(c, sens)
    n_pos = np.maximum(n, 0.0)
    if w.gaussian:
        integrand = n_pos**w.p * phi
    else:
        integrand = (n_pos / phi) ** w.p * phi
    return float(np.sum(integrand) * grid.cell_area)


def _check_formula(w: WeightSpec, sens: SensitivitySpec) -> None:
    if w.source is not WeightSource.FORMULA:
        return
    chi1 = float(np.max(sens.chi(np.linspace(0.0, w.cmax, 10_000))))
    expected = formula_beta(w.p, chi1)
    if not np.isclose(w.beta, expected, rtol=1e-12, atol=0.0):
        raise InvalidConfig(
            f"formula weight has beta={w.beta}, expected {expected} from chi1={chi1}"
        )


def weighted_energy(s: "State", w: WeightSpec, sens: SensitivitySpec) -> float:
    """
    Integral of max(n, 0)^p exp((beta c)^2).

    Args:
        s: Unflagged state.
        w: Gaussian weight specification.
        sens: Sensitivity family, used to confirm formula-derived beta.

    Returns:
        The weighted energy.
    """
    require_unflagged(s)
    if not w.gaussian:
        raise InvalidConfig(
            "weighted_energy uses the Gaussian weight; got an ode weight"
        )
    _check_formula(w, sens)
    return weighted_values(s.n.values, s.c.values, s.grid, w, sens)


def lp_growth_bound(p: float, beta: float, c0_max: float, n0_lp: float) -> float:
    """Upper bound exp(beta^2 |c0|_inf^2) int n0^p on int n(t)^p."""
    return float(np.exp((beta * c0_max) ** 2) * n0_lp)
