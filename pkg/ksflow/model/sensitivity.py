"""Chemotactic sensitivity and consumption rate families."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from ksflow.errors import InvalidConfig, OutOfDomain


@dataclass(frozen=True)
class SensitivitySpec:
    """
    Polynomial constitutive functions of the oxygen concentration.

    chi(c) = chi0 + chi1_lin * c and k(c) = kap1 * c + kap2 * c**2, so k(0) = 0
    and nonnegative coefficients keep chi, k and their derivatives nonnegative
    for c >= 0.
    """

    chi0: float = 0.0
    chi1_lin: float = 0.0
    kap1: float = 0.0
    kap2: float = 0.0

    def __post_init__(self):
        for name in ("chi0", "chi1_lin", "kap1", "kap2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidConfig(f"{name} must be a nonnegative number, got {value}")

    @cached_property
    def chi_poly(self) -> Polynomial:
        return Polynomial([self.chi0, self.chi1_lin])

    @cached_property
    def k_poly(self) -> Polynomial:
        return Polynomial([0.0, self.kap1, self.kap2])

    @cached_property
    def chi_integral_poly(self) -> Polynomial:
        """Antiderivative of chi vanishing at c = 0."""
        return self.chi_poly.integ(lbnd=0.0)

    def chi(self, c):
        return self.chi_poly(c)

    def chi_prime(self, c):
        return self.chi_poly.deriv()(c)

    def k(self, c):
        return self.k_poly(c)

    def k_prime(self, c):
        return self.k_poly.deriv()(c)

    def chi_integral(self, c):
        return self.chi_integral_poly(c)

    def scaled(
        self, chi_factor: float = 1.0, k_factor: float = 1.0
    ) -> "SensitivitySpec":
        return SensitivitySpec(
            chi0=self.chi0 * chi_factor,
            chi1_lin=self.chi1_lin * chi_factor,
            kap1=self.kap1 * k_factor,
            kap2=self.kap2 * k_factor,
        )


def eval_sensitivity(
    spec: SensitivitySpec, c: float
) -> tuple[float, float, float, float]:
    """
    Evaluate chi, chi', k and k' at one concentration.

    Args:
        spec: Sensitivity family.
        c: Oxygen concentration, must be >= 0.

    Returns:
        Tuple (chi, chi_prime, k, k_prime).
    """
    if not np.isfinite(c) or c < 0:
        raise OutOfDomain(f"concentration must be >= 0, got {c}")
    return (
        float(spec.chi(c)),
        float(spec.chi_prime(c)),
        float(spec.k(c)),
        float(spec.k_prime(c)),
    )
