"""Space-time integrals monitored as continuation criteria."""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ksflow.errors import EmptyInput, InvalidExponent, StaleState
from ksflow.spectral.ops import gradient

from .norms import lp_norm_values

if TYPE_CHECKING:
    from ksflow.dynamics.trajectory import Trajectory


@dataclass(frozen=True)
class MixedNormSpec:
    """
    Exponents of the L^q-in-time, L^p-in-space norm of n.

    A pair is critical when d/p + 2/q = 2, the combination left unchanged by
    the parabolic scaling of the system.
    """

    p: float
    q: float
    d: int = 2

    def __post_init__(self):
        if not self.p > 1:
            raise InvalidExponent(f"space exponent must exceed 1, got {self.p}")
        if not (self.q >= 1 and np.isfinite(self.q)):
            raise InvalidExponent(
                f"time exponent must be finite and >= 1, got {self.q}"
            )
        if self.d not in (2, 3):
            raise InvalidExponent(f"dimension must be 2 or 3, got {self.d}")

    @property
    def scaling_sum(self) -> float:
        return self.d / self.p + 2.0 / self.q

    @property
    def is_critical(self) -> bool:
        return abs(self.scaling_sum - 2.0) <= 1e-12

    @classmethod
    def critical(cls, p: float, d: int = 2) -> "MixedNormSpec":
        """Critical pair with the given space exponent."""
        if not d / p < 2:
            raise InvalidExponent(f"no critical time exponent for p={p}, d={d}")
        spec = cls(p=p, q=2.0 / (2.0 - d / p), d=d)
        assert spec.is_critical
        return spec

    @classmethod
    def hyperbolic_2d(cls) -> "MixedNormSpec":
        """(p, q) = (inf, 2), the criterion for the hyperbolic oxygen equation."""
        return cls(p=np.inf, q=2.0, d=2)


@dataclass(frozen=True)
class CriterionValue:
    """A time integral and the window [t_start, t_end] it covers."""

    value: float
    t_start: float
    t_end: float


def _sampled(traj: "Trajectory"):
    if not traj.samples:
        raise EmptyInput("trajectory holds no samples")
    if any(s.flagged for s in traj.samples):
        raise StaleState("trajectory contains flagged samples")
    return traj.samples


def mixed_norm_integral(traj: "Trajectory", spec: MixedNormSpec) -> CriterionValue:
    """
    Trapezoidal integral of |n(t)|_p^q over the sampled states.

    Args:
        traj: Trajectory with at least one unflagged sample.
        spec: Exponent pair.

    Returns:
        CriterionValue over the sampled window.
    """
    samples = _sampled(traj)
    times = np.array([s.t for s in samples])
    values = np.array(
        [lp_norm_values(s.n.values, s.grid, spec.p) ** spec.q for s in samples]
    )
    total = float(np.trapezoid(values, times)) if len(samples) > 1 else 0.0
    return CriterionValue(total, float(times[0]), float(times[-1]))


def grad_c_criterion(traj: "Trajectory") -> CriterionValue:
    """Trapezoidal integral of |grad c(t)|_inf^2."""
    samples = _sampled(traj)
    times = np.array([s.t for s in samples])
    values = np.array([np.max(gradient(s.c).magnitude()) ** 2 for s in samples])
    total = float(np.trapezoid(values, times)) if len(samples) > 1 else 0.0
    return CriterionValue(total, float(times[0]), float(times[-1]))


def serrin_velocity_pair_ok(beta: float, gamma: float) -> bool:
    """3/beta + 2/gamma <= 1 with 3 < beta <= inf, the 3-D velocity condition."""
    if not (3 < beta and gamma >= 1):
        return False
    return 3.0 / beta + 2.0 / gamma <= 1.0 + 1e-12


def critical_pair_ok(p: float, q: float, d: int = 3) -> bool:
    """d/p + 2/q = 2 with d/2 < p <= inf."""
    if not (d / 2 < p and q >= 1):
        return False
    return abs(d / p + 2.0 / q - 2.0) <= 1e-12
