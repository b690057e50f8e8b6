"""Checks of the sign and smallness hypotheses on chi and k."""

from dataclasses import dataclass, field

import numpy as np

from ksflow.errors import OutOfDomain

from .config import ModelConfig

SUP_GRID_POINTS = 10_000
DEFAULT_P_VALUES = (2, 3, 4)


@dataclass(frozen=True)
class AssumptionReport:
    """
    Outcome of validate_assumptions.

    smallness_products maps p to chi1_sup * cmax * 24p; a value <= 1 meets the
    weighted L^p smallness condition for that exponent.
    """

    chi_k_signs_ok: bool
    k_zero_ok: bool
    sup_chi_minus_mu_k: float
    chi1_sup: float
    smallness_products: dict[int, float]
    cmax: float
    chi_k_increasing_ok: bool = True
    k_over_chi_concave_ok: bool = True
    notes: list[str] = field(default_factory=list)

    def smallness_ok(self, p: int = 2) -> bool:
        return self.smallness_products[p] <= 1.0

    @property
    def ok(self) -> bool:
        return self.chi_k_signs_ok and self.k_zero_ok


def sample_grid(cmax: float) -> np.ndarray:
    return np.linspace(0.0, cmax, SUP_GRID_POINTS)


def chi_sup(config: ModelConfig, cmax: float) -> float:
    """Grid supremum of chi over [0, cmax]."""
    return float(np.max(config.sensitivity.chi(sample_grid(cmax))))


def validate_assumptions(
    config: ModelConfig,
    c0_max: float,
    p_values: tuple[int, ...] = DEFAULT_P_VALUES,
) -> AssumptionReport:
    """
    Evaluate the structural hypotheses on [0, c0_max].

    Args:
        config: Model configuration holding the sensitivity family and mu.
        c0_max: Upper end of the concentration range, normally max c0.
        p_values: Exponents for which the smallness product is reported.

    Returns:
        AssumptionReport; failed checks are reported, never raised.
    """
    if not np.isfinite(c0_max) or c0_max < 0:
        raise OutOfDomain(f"c0_max must be >= 0, got {c0_max}")

    sens = config.sensitivity
    c = sample_grid(c0_max)
    chi = sens.chi(c)
    k = sens.k(c)
    tol = 1e-14

    signs_ok = bool(
        np.all(chi >= -tol)
        and np.all(sens.chi_prime(c) >= -tol)
        and np.all(k >= -tol)
        and np.all(sens.k_prime(c) >= -tol)
    )
    k_zero_ok = float(sens.k(0.0)) == 0.0
    sup_gap = float(np.max(np.abs(chi - config.mu * k)))
    chi1 = float(np.max(chi))
    products = {int(p): chi1 * c0_max * 24 * p for p in p_values}
    if 2 not in products:
        products[2] = chi1 * c0_max * 48

    notes = []
    chi_k_rate = (sens.chi_poly * sens.k_poly).deriv()(c)
    increasing_ok = bool(np.all(chi_k_rate >= -tol))
    if not increasing_ok:
        notes.append("(chi k)' takes negative values")

    concave_ok = True
    positive = chi > 0
    if np.any(positive):
        ratio = sens.k_poly.deriv(2)(c) / np.where(positive, chi, 1.0)
        k1 = sens.k_prime(c)
        chi1_prime = sens.chi_prime(c)
        chi2 = sens.chi_poly.deriv(2)(c)
        safe = np.where(positive, chi, 1.0)
        second = (
            ratio
            - k * chi2 / safe**2
            - 2 * chi1_prime * (k1 * safe - k * chi1_prime) / safe**3
        )
        concave_ok = bool(np.all(second[positive] <= 1e-12))
        if not concave_ok:
            notes.append("(k / chi)'' takes positive values")

    return AssumptionReport(
        chi_k_signs_ok=signs_ok,
        k_zero_ok=k_zero_ok,
        sup_chi_minus_mu_k=sup_gap,
        chi1_sup=chi1,
        smallness_products=products,
        cmax=float(c0_max),
        chi_k_increasing_ok=increasing_ok,
        k_over_chi_concave_ok=concave_ok,
        notes=notes,
    )
