"""Per-step diagnostics records."""

from dataclasses import astuple, dataclass, fields
from typing import TYPE_CHECKING, Iterable

import numpy as np
import pandas as pd

from ksflow.model.config import ModelConfig
from ksflow.spectral.ops import curl, divergence_residual, gradient

from .norms import entropy_values, kinetic_energy, lp_norm_values
from .weights import WeightSpec, weighted_values

if TYPE_CHECKING:
    from ksflow.dynamics.state import State


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    l1_n: float
    l2_n: float
    l4_n: float
    linf_n: float
    l2_grad_c: float
    l2_vorticity: float
    kinetic: float
    entropy: float
    min_n: float
    max_n: float
    min_c: float
    max_c: float
    div_residual: float
    weighted_energy: float
    dt: float


CSV_COLUMNS = tuple(f.name for f in fields(DiagnosticsRecord))


def compute_record(
    state: "State", model: ModelConfig, weight: WeightSpec, dt: float
) -> DiagnosticsRecord:
    """Evaluate every per-step functional of a state."""
    grid = state.grid
    n = state.n.values
    c = state.c.values
    omega = curl(state.u).values
    return DiagnosticsRecord(
        t=float(state.t),
        mass=state.n.integral(),
        l1_n=lp_norm_values(n, grid, 1),
        l2_n=lp_norm_values(n, grid, 2),
        l4_n=lp_norm_values(n, grid, 4),
        linf_n=lp_norm_values(n, grid, np.inf),
        l2_grad_c=float(np.sqrt(kinetic_energy(gradient(state.c)))),
        l2_vorticity=lp_norm_values(omega, grid, 2),
        kinetic=kinetic_energy(state.u),
        entropy=entropy_values(n, grid),
        min_n=float(np.min(n)),
        max_n=float(np.max(n)),
        min_c=float(np.min(c)),
        max_c=float(np.max(c)),
        div_residual=divergence_residual(state.u),
        weighted_energy=weighted_values(n, c, grid, weight, model.sensitivity),
        dt=float(dt),
    )


def records_frame(records: Iterable[DiagnosticsRecord]) -> pd.DataFrame:
    """DataFrame with one row per record, columns in CSV order."""
    rows = [astuple(r) for r in records]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS), dtype=float)


def weighted_energy_monotone(frame: pd.DataFrame, tolerance: float = 1e-8) -> bool:
    """True when no step raises the weighted energy beyond the relative tolerance."""
    energy = frame["weighted_energy"].to_numpy()
    if len(energy) < 2:
        return True
    increase = np.diff(energy)
    scale = np.maximum(np.abs(energy[:-1]), np.finfo(float).tiny)
    return bool(np.all(increase <= tolerance * scale))
