"""Smallness-threshold sweeps over one initial-data amplitude."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from ksflow.diagnostics.decay import decay_envelope
from ksflow.diagnostics.records import weighted_energy_monotone
from ksflow.diagnostics.weights import WeightSpec, lp_growth_bound
from ksflow.dynamics.trajectory import Trajectory, run_trajectory
from ksflow.errors import EmptyInput, InvalidConfig, NoBracket
from ksflow.model.assumptions import chi_sup
from ksflow.model.config import ModelConfig
from ksflow.model.initial import InitialConditionSpec
from ksflow.model.scaling import scale_initial_condition
from ksflow.store.diagnostics_csv import FLOAT_FORMAT, write_diagnostics_csv
from ksflow.store.paths import get_max_workers, value_dirname

logger = logging.getLogger(__name__)

SWEEP_PARAMETERS = ("c0_linf", "n0_l1", "n0_ld2")
SUMMARY_COLUMNS = [
    "value",
    "termination",
    "t_final",
    "energy_monotone",
    "envelope_ratio",
    "lp_bound_ok",
    "fired",
    "outcome",
]


class SweepOutcome(str, Enum):
    STABLE = "stable"
    SUSPECT = "suspect"


@dataclass(frozen=True)
class SweepSettings:
    """
    Classification settings for a threshold sweep.

    gamma defaults to d/4 for mu=1 and 1 for mu=0. The late window defaults to
    [5, t_end]; when a run never reaches it the envelope criterion is skipped.
    """

    gamma: Optional[float] = None
    early_window: tuple[float, float] = (1.0, 5.0)
    late_window: Optional[tuple[float, float]] = None
    max_workers: Optional[int] = None
    energy_tolerance: float = 1e-8
    envelope_ratio_max: float = 1.1

    def resolved_gamma(self, m: ModelConfig, d: int = 2) -> float:
        if self.gamma is not None:
            return self.gamma
        return d / 4 if m.mu == 1 else 1.0

    def resolved_late_window(self, m: ModelConfig) -> tuple[float, float]:
        if self.late_window is not None:
            return self.late_window
        return (self.early_window[1], m.t_end)


@dataclass
class SweepReport:
    parameter: str
    values: tuple[float, ...]
    outcomes: tuple[SweepOutcome, ...]
    bracket: Optional[tuple[float, float]]
    no_bracket: bool
    anomalies: list[float] = field(default_factory=list)
    details: pd.DataFrame = field(default_factory=pd.DataFrame)

    @property
    def all_flagged(self) -> bool:
        """True when no run reached t_end."""
        terminations = self.details.get("termination", pd.Series(dtype=object))
        return len(terminations) > 0 and bool((terminations != "completed").all())

    def require_bracket(self) -> tuple[float, float]:
        if self.no_bracket or self.bracket is None:
            raise NoBracket(
                f"sweep over {self.parameter} found no stable-to-suspect transition"
            )
        return self.bracket


def scaled_for_value(
    m: ModelConfig, ic: InitialConditionSpec, parameter: str, value: float
) -> InitialConditionSpec:
    """
    Rescale the designated amplitude so the sampled norm equals value.

    In 2-D the L^{d/2} norm is the L^1 norm, so n0_ld2 rescales like n0_l1.
    """
    grid = m.grid
    if parameter == "c0_linf":
        current = float(np.max(np.abs(ic.c_field(grid))))
    elif parameter in ("n0_l1", "n0_ld2"):
        current = float(np.sum(np.abs(ic.n_field(grid))) * grid.cell_area)
    else:
        raise InvalidConfig(
            f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
        )

    if current == 0:
        if value != 0:
            raise InvalidConfig(f"cannot rescale zero {parameter} data to {value}")
        factor = 0.0
    else:
        factor = value / current

    if parameter == "c0_linf":
        return scale_initial_condition(ic, c_factor=factor)
    return scale_initial_condition(ic, n_factor=factor)


def _envelope_ratio(
    traj: Trajectory,
    gamma: float,
    early: tuple[float, float],
    late: tuple[float, float],
) -> Optional[float]:
    t_final = traj.t_final
    late = (late[0], min(late[1], t_final))
    if traj.flagged or not late[0] < late[1]:
        return None
    try:
        early_value = decay_envelope(traj, gamma, early)
        late_value = decay_envelope(traj, gamma, late)
    except EmptyInput:
        return None
    if early_value == 0:
        return 0.0 if late_value == 0 else np.inf
    return late_value / early_value


def _lp_bound_ok(traj: Trajectory, weight: WeightSpec) -> Optional[bool]:
    if not weight.gaussian or weight.p != 2:
        return None
    frame = traj.records_frame()
    l2_squared = frame["l2_n"].to_numpy() ** 2
    bound = lp_growth_bound(weight.p, weight.beta, weight.cmax, l2_squared[0])
    return bool(np.all(l2_squared <= bound * (1 + 1e-8) + 1e-300))


def _run_value(
    m: ModelConfig,
    ic: InitialConditionSpec,
    parameter: str,
    value: float,
    settings: SweepSettings,
    output_dir: Optional[str],
) -> dict[str, Any]:
    """Run and classify one swept value; must stay importable for worker processes."""
    value_ic = scaled_for_value(m, ic, parameter, value)

    weight = None
    if parameter == "c0_linf":
        cmax = max(float(np.max(value_ic.c_field(m.grid))), 0.0)
        weight = WeightSpec.from_formula(2.0, chi_sup(m, cmax), cmax)

    traj = run_trajectory(m, value_ic, weight=weight)
    frame = traj.records_frame()

    energy_ok = None
    if parameter == "c0_linf":
        energy_ok = weighted_energy_monotone(frame, settings.energy_tolerance)
    ratio = _envelope_ratio(
        traj,
        settings.resolved_gamma(m),
        settings.early_window,
        settings.resolved_late_window(m),
    )

    fired = []
    if traj.flagged:
        fired.append(traj.termination.value)
    if energy_ok is False:
        fired.append("energy")
    if ratio is not None and ratio > settings.envelope_ratio_max:
        fired.append("envelope")
    outcome = SweepOutcome.SUSPECT if fired else SweepOutcome.STABLE

    if output_dir is not None:
        run_dir = Path(output_dir) / value_dirname(value)
        write_diagnostics_csv(frame, run_dir / "diagnostics.csv")

    logger.info("%s=%.6g: %s %s", parameter, value, outcome.value, ",".join(fired))
    return {
        "value": float(value),
        "termination": traj.termination.value,
        "t_final": traj.t_final,
        "energy_monotone": energy_ok,
        "envelope_ratio": ratio,
        "lp_bound_ok": _lp_bound_ok(traj, traj.weight),
        "fired": ";".join(fired),
        "outcome": outcome.value,
    }


def threshold_sweep(
    m: ModelConfig,
    ic: InitialConditionSpec,
    parameter: str,
    values: Sequence[float],
    settings: Optional[SweepSettings] = None,
    output_dir: Optional[str | Path] = None,
) -> SweepReport:
    """
    Classify a strictly increasing sequence of initial amplitudes.

    A value is stable when its run completes, the formula weighted energy is
    monotone (c0_linf sweeps only) and the late decay envelope stays within
    envelope_ratio_max of the early one. Values run as independent processes
    when max_workers > 1; results are ordered by value.

    Args:
        m: Model template.
        ic: Initial-data template.
        parameter: One of c0_linf, n0_l1, n0_ld2.
        values: Strictly increasing parameter values.
        settings: Classification settings.
        output_dir: When given, receives sweep_<parameter>/<value>/diagnostics.csv
            and sweep_<parameter>/summary.csv.

    Returns:
        SweepReport. A missing bracket is reported through no_bracket.
    """
    settings = settings or SweepSettings()
    values = tuple(float(v) for v in values)
    if parameter not in SWEEP_PARAMETERS:
        raise InvalidConfig(
            f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
        )
    if not values:
        raise EmptyInput("sweep needs at least one value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidConfig("sweep values must be strictly increasing")

    sweep_dir = None
    if output_dir is not None:
        sweep_dir = Path(output_dir) / f"sweep_{parameter}"
        sweep_dir.mkdir(parents=True, exist_ok=True)
    target = str(sweep_dir) if sweep_dir is not None else None

    workers = settings.max_workers or get_max_workers()
    jobs = [(m, ic, parameter, v, settings, target) for v in values]
    if workers > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(values))) as pool:
            rows = list(pool.map(_run_value, *zip(*jobs)))
    else:
        rows = [_run_value(*job) for job in jobs]

    details = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    outcomes = tuple(SweepOutcome(o) for o in details["outcome"])

    suspect = [i for i, o in enumerate(outcomes) if o is SweepOutcome.SUSPECT]
    first_suspect = suspect[0] if suspect else None
    bracket = None
    anomalies = []
    if first_suspect is not None:
        anomalies = [
            values[i]
            for i in range(first_suspect + 1, len(values))
            if outcomes[i] is SweepOutcome.STABLE
        ]
        if first_suspect > 0:
            bracket = (values[first_suspect - 1], values[first_suspect])
    if anomalies:
        logger.warning("Stable values above the first suspect value: %s", anomalies)

    if sweep_dir is not None:
        details.to_csv(
            sweep_dir / "summary.csv",
            index=False,
            float_format=FLOAT_FORMAT,
            lineterminator="\n",
        )

    return SweepReport(
        parameter=parameter,
        values=values,
        outcomes=outcomes,
        bracket=bracket,
        no_bracket=bracket is None,
        anomalies=anomalies,
        details=details,
    )
