"""Scalar functionals of states and trajectories."""

from .criteria import (
    CriterionValue,
    MixedNormSpec,
    critical_pair_ok,
    grad_c_criterion,
    mixed_norm_integral,
    serrin_velocity_pair_ok,
)
from .decay import decay_envelope, decay_envelope_series, decay_fit, sup_norm_series
from .identities import (
    truncated_energy,
    truncated_identity_residual,
    weighted_identity_residual,
)
from .level_sets import (
    LevelSetSpec,
    level_set_constants,
    level_set_dU,
    level_set_E,
    level_set_U,
    xi0,
    xi_grid_from,
)
from .norms import (
    energy_functional,
    entropy,
    grad_l2,
    kinetic_energy,
    lp_norm,
    mass,
    moment_centered,
    vorticity,
)
from .records import (
    CSV_COLUMNS,
    DiagnosticsRecord,
    compute_record,
    records_frame,
    weighted_energy_monotone,
)
from .weights import (
    WeightSource,
    WeightSpec,
    formula_beta,
    lp_growth_bound,
    weight_gauss,
    weight_ode,
    weighted_energy,
)

__all__ = [
    "CSV_COLUMNS",
    "CriterionValue",
    "DiagnosticsRecord",
    "LevelSetSpec",
    "MixedNormSpec",
    "WeightSource",
    "WeightSpec",
    "compute_record",
    "critical_pair_ok",
    "decay_envelope",
    "decay_envelope_series",
    "decay_fit",
    "energy_functional",
    "entropy",
    "formula_beta",
    "grad_c_criterion",
    "grad_l2",
    "kinetic_energy",
    "level_set_E",
    "level_set_U",
    "level_set_constants",
    "level_set_dU",
    "lp_growth_bound",
    "lp_norm",
    "mass",
    "mixed_norm_integral",
    "moment_centered",
    "records_frame",
    "serrin_velocity_pair_ok",
    "sup_norm_series",
    "truncated_energy",
    "truncated_identity_residual",
    "vorticity",
    "weight_gauss",
    "weight_ode",
    "weighted_energy",
    "weighted_energy_monotone",
    "weighted_identity_residual",
    "xi0",
    "xi_grid_from",
]
