"""Sectioned key = value run configuration files."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from ksflow.diagnostics.level_sets import VARIANTS
from ksflow.diagnostics.weights import WeightSource, WeightSpec
from ksflow.errors import ConfigError, InvalidConfig
from ksflow.model.assumptions import AssumptionReport, chi_sup, validate_assumptions
from ksflow.model.config import Fluid, ModelConfig, Scheme, StepperConfig
from ksflow.model.initial import Blob, InitialConditionSpec, VelocityMode
from ksflow.model.sensitivity import SensitivitySpec
from ksflow.spectral.grid import GridSpec


@dataclass(frozen=True)
class OutputSettings:
    directory: Optional[str] = None
    emit_plot_data: bool = False
    snapshots: bool = True


@dataclass(frozen=True)
class DiagnosticsSettings:
    """Weight and level-set choices for a run's diagnostics."""

    weight_p: float = 2.0
    weight_source: Optional[WeightSource] = None
    weight_beta: float = 0.0
    levelset_count: int = 50
    levelset_factor_max: float = 100.0
    levelset_variant: Optional[str] = None

    def weight_spec(self, model: ModelConfig, c0_max: float) -> WeightSpec:
        """Weight for the run; the source defaults to formula (mu=1) or ode (mu=0)."""
        cmax = max(c0_max, 0.0)
        source = self.weight_source
        if source is None:
            source = WeightSource.FORMULA if model.mu == 1 else WeightSource.ODE
        if source is WeightSource.FORMULA:
            return WeightSpec.from_formula(self.weight_p, chi_sup(model, cmax), cmax)
        if source is WeightSource.MANUAL:
            return WeightSpec.manual(self.weight_p, self.weight_beta, cmax)
        return WeightSpec.ode(self.weight_p, cmax)


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    initial: InitialConditionSpec
    output: OutputSettings = field(default_factory=OutputSettings)
    diagnostics: DiagnosticsSettings = field(default_factory=DiagnosticsSettings)
    assumptions: Optional[AssumptionReport] = None

    @property
    def c0_max(self) -> float:
        return float(np.max(self.initial.c_field(self.model.grid)))


# Value parsers raise ValueError; the caller attaches the line number.


def _float(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise ValueError(f"expected a finite number, got {text!r}")
    return value


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true or false, got {text!r}")


def _mu(text: str) -> int:
    value = _int(text)
    if value not in (0, 1):
        raise ValueError(f"mu must be 0 or 1, got {value}")
    return value


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


def _blobs(text: str) -> tuple[Blob, ...]:
    blobs = []
    for chunk in filter(None, (part.strip() for part in text.split(";"))):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 4:
            raise ValueError(f"blob needs 'amplitude, x, y, width', got {chunk!r}")
        amp, x, y, width = (_float(p) for p in parts)
        try:
            blobs.append(Blob(amplitude=amp, center=(x, y), width=width))
        except InvalidConfig as exc:
            raise ValueError(str(exc)) from None
    return tuple(blobs)


def _str(text: str) -> str:
    return text


_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "model": {
        "mu": _mu,
        "fluid": _choice(*(f.value for f in Fluid)),
        "grad_phi_x": _float,
        "grad_phi_y": _float,
        "chi0": _float,
        "chi1_lin": _float,
        "kap1": _float,
        "kap2": _float,
        "t_end": _float,
        "sample_interval": _float,
    },
    "grid": {"nx": _int, "ny": _int, "lx": _float, "ly": _float},
    "stepper": {
        "scheme": _choice(*(s.value for s in Scheme)),
        "dt_init": _float,
        "cfl_safety": _float,
        "dt_max": _float,
        "dt_min": _float,
        "filter_order": _int,
        "adaptive": _bool,
        "blowup_factor": _float,
    },
    "initial": {
        "n_blobs": _blobs,
        "c_blobs": _blobs,
        "c_background": _float,
        "u_mode": _choice("zero", "taylor_green"),
        "u_amplitude": _float,
    },
    "diagnostics": {
        "weight_p": _float,
        "weight_source": _choice(*(s.value for s in WeightSource)),
        "weight_beta": _float,
        "levelset_count": _int,
        "levelset_factor_max": _float,
        "levelset_variant": _choice(*VARIANTS),
    },
    "output": {"directory": _str, "emit_plot_data": _bool, "snapshots": _bool},
}

_REQUIRED = {
    "model": ("mu", "t_end", "sample_interval"),
    "grid": ("nx", "ny", "lx", "ly"),
}


def _read_entries(text: str) -> tuple[dict, dict, dict]:
    """Split text into {section: {key: value}}, key lines and section lines."""
    values: dict[str, dict[str, Any]] = {name: {} for name in _SCHEMA}
    key_lines: dict[tuple[str, str], int] = {}
    section_lines: dict[str, int] = {}
    section = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", number)
            if section in section_lines:
                raise ConfigError(f"section [{section}] appears twice", number)
            section_lines[section] = number
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", number)
        if section is None:
            raise ConfigError("entry outside of any section", number)

        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", number)
        if key in values[section]:
            raise ConfigError(f"duplicate key {key!r} in [{section}]", number)
        try:
            values[section][key] = _SCHEMA[section][key](value)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: {exc}", number) from None
        key_lines[(section, key)] = number

    for section, keys in _REQUIRED.items():
        for key in keys:
            if key not in values[section]:
                raise ConfigError(
                    f"missing required key {key!r} in [{section}]",
                    section_lines.get(section),
                )
    return values, key_lines, section_lines


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a run configuration.

    Args:
        text: File contents.

    Returns:
        RunConfig with the model, initial data, output and diagnostics
        settings and the AssumptionReport of the model.

    Raises:
        ConfigError: unknown or missing keys, malformed values or violated
            invariants, with the offending line number.
    """
    values, key_lines, section_lines = _read_entries(text)

    def build(section: str, factory: Callable[[], Any]):
        try:
            return factory()
        except InvalidConfig as exc:
            line = section_lines.get(section)
            for key in values[section]:
                if key in str(exc):
                    line = key_lines[(section, key)]
                    break
            raise ConfigError(str(exc), line) from None

    model_v = values["model"]
    step_v = values["stepper"]
    init_v = values["initial"]
    diag_v = values["diagnostics"]
    out_v = values["output"]

    grid = build("grid", lambda: GridSpec(**values["grid"]))
    sensitivity = build(
        "model",
        lambda: SensitivitySpec(
            chi0=model_v.get("chi0", 0.0),
            chi1_lin=model_v.get("chi1_lin", 0.0),
            kap1=model_v.get("kap1", 0.0),
            kap2=model_v.get("kap2", 0.0),
        ),
    )
    defaults = StepperConfig()
    stepper = build(
        "stepper",
        lambda: StepperConfig(
            scheme=Scheme(step_v.get("scheme", defaults.scheme.value)),
            dt_init=step_v.get("dt_init", defaults.dt_init),
            cfl_safety=step_v.get("cfl_safety", defaults.cfl_safety),
            dt_max=step_v.get("dt_max", defaults.dt_max),
            dt_min=step_v.get("dt_min", defaults.dt_min),
            hyperbolic_filter_order=step_v.get(
                "filter_order", defaults.hyperbolic_filter_order
            ),
            adaptive=step_v.get("adaptive", defaults.adaptive),
            blowup_factor=step_v.get("blowup_factor", defaults.blowup_factor),
        ),
    )
    model = build(
        "model",
        lambda: ModelConfig(
            grid=grid,
            mu=model_v["mu"],
            fluid=Fluid(model_v.get("fluid", Fluid.NAVIER_STOKES.value)),
            grad_phi=(model_v.get("grad_phi_x", 0.0), model_v.get("grad_phi_y", 0.0)),
            sensitivity=sensitivity,
            t_end=model_v["t_end"],
            sample_interval=model_v["sample_interval"],
            stepper=stepper,
        ),
    )
    initial = build(
        "initial",
        lambda: InitialConditionSpec(
            n_blobs=init_v.get("n_blobs", ()),
            c_blobs=init_v.get("c_blobs", ()),
            c_background=init_v.get("c_background", 0.0),
            u_mode=VelocityMode(
                init_v.get("u_mode", "zero"), init_v.get("u_amplitude", 0.0)
            ),
        ),
    )
    diagnostics = build(
        "diagnostics",
        lambda: _diagnostics_settings(diag_v),
    )
    output = OutputSettings(
        directory=out_v.get("directory"),
        emit_plot_data=out_v.get("emit_plot_data", False),
        snapshots=out_v.get("snapshots", True),
    )

    c0_max = float(np.max(initial.c_field(grid)))
    return RunConfig(
        model=model,
        initial=initial,
        output=output,
        diagnostics=diagnostics,
        assumptions=validate_assumptions(model, c0_max),
    )


def _diagnostics_settings(values: dict[str, Any]) -> DiagnosticsSettings:
    source = values.get("weight_source")
    settings = DiagnosticsSettings(
        weight_p=values.get("weight_p", 2.0),
        weight_source=WeightSource(source) if source else None,
        weight_beta=values.get("weight_beta", 0.0),
        levelset_count=values.get("levelset_count", 50),
        levelset_factor_max=values.get("levelset_factor_max", 100.0),
        levelset_variant=values.get("levelset_variant"),
    )
    if settings.weight_p < 2:
        raise InvalidConfig(f"weight_p must be >= 2, got {settings.weight_p}")
    if settings.weight_beta < 0:
        raise InvalidConfig(f"weight_beta must be >= 0, got {settings.weight_beta}")
    if settings.levelset_count < 2:
        raise InvalidConfig(
            f"levelset_count must be >= 2, got {settings.levelset_count}"
        )
    if settings.levelset_factor_max <= 1:
        raise InvalidConfig(
            f"levelset_factor_max must exceed 1, got {settings.levelset_factor_max}"
        )
    return settings


def load_config(path: str | Path) -> RunConfig:
    """Read and parse a configuration file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)


def _num(value: float) -> str:
    return f"{value:.17g}"


def _format_blobs(blobs: tuple[Blob, ...]) -> str:
    return "; ".join(
        ", ".join(_num(v) for v in (b.amplitude, b.center[0], b.center[1], b.width))
        for b in blobs
    )


def format_config(config: RunConfig) -> str:
    """Render a RunConfig as text that parses back to the same values."""
    m = config.model
    s = m.stepper
    ic = config.initial
    d = config.diagnostics
    o = config.output
    sens = m.sensitivity

    lines = [
        "[model]",
        f"mu = {m.mu}",
        f"fluid = {m.fluid.value}",
        f"grad_phi_x = {_num(m.grad_phi[0])}",
        f"grad_phi_y = {_num(m.grad_phi[1])}",
        f"chi0 = {_num(sens.chi0)}",
        f"chi1_lin = {_num(sens.chi1_lin)}",
        f"kap1 = {_num(sens.kap1)}",
        f"kap2 = {_num(sens.kap2)}",
        f"t_end = {_num(m.t_end)}",
        f"sample_interval = {_num(m.sample_interval)}",
        "",
        "[grid]",
        f"nx = {m.grid.nx}",
        f"ny = {m.grid.ny}",
        f"lx = {_num(m.grid.lx)}",
        f"ly = {_num(m.grid.ly)}",
        "",
        "[stepper]",
        f"scheme = {s.scheme.value}",
        f"dt_init = {_num(s.dt_init)}",
        f"cfl_safety = {_num(s.cfl_safety)}",
        f"dt_max = {_num(s.dt_max)}",
        f"dt_min = {_num(s.dt_min)}",
        f"filter_order = {int(s.hyperbolic_filter_order)}",
        f"adaptive = {str(s.adaptive).lower()}",
        f"blowup_factor = {_num(s.blowup_factor)}",
        "",
        "[initial]",
    ]
    if ic.n_blobs:
        lines.append(f"n_blobs = {_format_blobs(ic.n_blobs)}")
    if ic.c_blobs:
        lines.append(f"c_blobs = {_format_blobs(ic.c_blobs)}")
    lines += [
        f"c_background = {_num(ic.c_background)}",
        f"u_mode = {ic.u_mode.kind}",
        f"u_amplitude = {_num(ic.u_mode.amplitude)}",
        "",
        "[diagnostics]",
        f"weight_p = {_num(d.weight_p)}",
    ]
    if d.weight_source is not None:
        lines.append(f"weight_source = {d.weight_source.value}")
    lines += [
        f"weight_beta = {_num(d.weight_beta)}",
        f"levelset_count = {d.levelset_count}",
        f"levelset_factor_max = {_num(d.levelset_factor_max)}",
    ]
    if d.levelset_variant is not None:
        lines.append(f"levelset_variant = {d.levelset_variant}")
    lines += ["", "[output]"]
    if o.directory is not None:
        lines.append(f"directory = {o.directory}")
    lines += [
        f"emit_plot_data = {str(o.emit_plot_data).lower()}",
        f"snapshots = {str(o.snapshots).lower()}",
    ]
    return "\n".join(lines) + "\n"
