"""Model parameters, constitutive functions and initial data."""

from .assumptions import AssumptionReport, chi_sup, validate_assumptions
from .config import Fluid, ModelConfig, Scheme, StepperConfig
from .initial import Blob, InitialConditionSpec, VelocityMode, build_initial_state
from .scaling import scale_initial_condition, scaled_problem
from .sensitivity import SensitivitySpec, eval_sensitivity

__all__ = [
    "AssumptionReport",
    "Blob",
    "Fluid",
    "InitialConditionSpec",
    "ModelConfig",
    "Scheme",
    "SensitivitySpec",
    "StepperConfig",
    "VelocityMode",
    "build_initial_state",
    "chi_sup",
    "eval_sensitivity",
    "scale_initial_condition",
    "scaled_problem",
    "validate_assumptions",
]
