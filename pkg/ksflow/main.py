"""CLI entrypoint for ksflow."""

import sys
from pathlib import Path

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv

from ksflow import __version__
from ksflow.diagnostics.decay import decay_envelope_series, decay_fit
from ksflow.diagnostics.level_sets import (
    LevelSetSpec,
    level_set_U,
    xi0,
    xi_grid_from,
)
from ksflow.dynamics.trajectory import Trajectory, run_trajectory
from ksflow.errors import (
    DtUnderflow,
    EmptyInput,
    GridMismatch,
    InvalidConfig,
    InvalidSeries,
    KsflowError,
    ScaledRunFailed,
)
from ksflow.experiments.compare import compare_trajectories
from ksflow.experiments.oracle import oracle_fd_run
from ksflow.experiments.scaling import run_scaling_pair
from ksflow.experiments.sweep import SWEEP_PARAMETERS, SweepSettings, threshold_sweep
from ksflow.store.config_file import RunConfig, load_config
from ksflow.store.diagnostics_csv import (
    FLOAT_FORMAT,
    read_diagnostics_csv,
    write_diagnostics_csv,
)
from ksflow.store.paths import get_log_level, get_output_dir
from ksflow.store.plot_data import write_plot_data
from ksflow.store.snapshot import (
    read_snapshot,
    snapshot_from_state,
    state_from_snapshot,
    write_snapshot,
)
from ksflow.ui.cli import (
    configure_logging,
    console,
    create_progress,
    print_assumption_report,
    print_comparison,
    print_decay_analysis,
    print_error,
    print_header,
    print_info,
    print_run_summary,
    print_scaling_report,
    print_success,
    print_sweep_report,
    print_warning,
)

EXIT_FLAGGED = 1
EXIT_CONFIG = 2
VANISHING_FRACTION = 1e-12

# Load environment variables
load_dotenv()


def _load(path: str) -> RunConfig:
    """Load a config or exit with the config-error code."""
    try:
        return load_config(path)
    except InvalidConfig as e:
        print_error(f"Config error: {e}")
        sys.exit(EXIT_CONFIG)


def _run_with_progress(config: RunConfig, **kwargs) -> Trajectory:
    model = config.model
    with create_progress() as progress:
        task = progress.add_task("Integrating...", total=100)

        def update_progress(current: float, total: float):
            pct = 100.0 * current / total if total > 0 else 100.0
            progress.update(task, completed=pct)

        traj = run_trajectory(
            model,
            config.initial,
            progress_callback=update_progress,
            **kwargs,
        )
        progress.update(task, completed=100)
    return traj


def _sample_index(t: float, interval: float) -> int:
    return int(np.ceil(t / interval - 1e-6))


def _level_set_spec(config: RunConfig, xi_grid) -> LevelSetSpec:
    p = config.diagnostics.weight_p
    if config.model.mu == 1:
        return LevelSetSpec.parabolic(xi_grid, p=p)
    return LevelSetSpec.hyperbolic(xi_grid, p=p)


def _report_level_sets(config: RunConfig, traj: Trajectory, output: Path) -> None:
    """Evaluate U(xi) on a geometric grid and report where it vanishes."""
    settings = config.diagnostics
    start = xi0(traj.samples[0], _level_set_spec(config, ()))
    if start <= 0:
        print_info("Initial data vanish; level sets skipped")
        return

    grid = xi_grid_from(start, settings.levelset_factor_max, settings.levelset_count)
    ls = _level_set_spec(config, grid)
    values = level_set_U(traj, ls, traj.weight, settings.levelset_variant)
    frame = pd.DataFrame(values, columns=["xi", "U"])
    frame.to_csv(
        output / "levelset_U.csv",
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
    )

    top = frame["U"].iloc[0]
    vanished = frame[frame["U"] <= VANISHING_FRACTION * top]
    if top == 0:
        print_info("U vanishes at the first level")
    elif len(vanished):
        xi = vanished["xi"].iloc[0]
        print_success(f"U(xi) vanishes at xi = {xi:.6g} ({xi / start:.3g} xi0)")
    else:
        limit = settings.levelset_factor_max
        print_warning(f"U(xi) does not vanish within {limit:g} xi0")


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--log-level", default=None, help="Logging level (default KSFLOW_LOG_LEVEL)"
)
def cli(log_level: str | None):
    """ksflow - Keller-Segel-Navier-Stokes simulations and diagnostics."""
    configure_logging(log_level or get_log_level())


@cli.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True))
@click.option("--output", "-o", default=None, help="Output directory")
@click.option("--emit-plot-data", is_flag=True, help="Write <column>.dat files")
@click.option("--restart", default=None, help="Restart from a snapshot file")
def run(
    config_path: str, output: str | None, emit_plot_data: bool, restart: str | None
):
    """Integrate a configuration and write diagnostics and snapshots."""
    config = _load(config_path)
    print_header("ksflow - Run")
    print_assumption_report(config.assumptions)
    console.print()

    out = get_output_dir(output or config.output.directory)
    kwargs = {}
    if restart:
        try:
            snapshot = read_snapshot(restart)
            config.model.grid.require_same(snapshot.grid)
        except (OSError, KsflowError) as e:
            print_error(f"Cannot restart from {restart}: {e}")
            sys.exit(EXIT_CONFIG)
        kwargs["initial_state"] = state_from_snapshot(snapshot)
        print_info(f"Restarting from t = {snapshot.t:.6g}")

    c0_max = config.c0_max
    if restart:
        c0_max = float(np.max(kwargs["initial_state"].c.values))
    try:
        weight = config.diagnostics.weight_spec(config.model, c0_max)
    except InvalidConfig as e:
        print_error(f"Config error: {e}")
        sys.exit(EXIT_CONFIG)

    traj = _run_with_progress(config, weight=weight, **kwargs)
    frame = traj.records_frame()

    csv_path = write_diagnostics_csv(frame, out / "diagnostics.csv")
    print_success(f"Wrote {len(frame)} records to {csv_path}")
    if config.output.snapshots:
        # numbered by sample slot so restarted runs continue the sequence
        first = 0 if not restart else 1
        for state in traj.samples[first:]:
            index = _sample_index(state.t, config.model.sample_interval)
            snapshot = snapshot_from_state(state, config.model)
            write_snapshot(out / f"snapshot_{index:04d}.ksns", snapshot)
    write_snapshot(
        out / "snapshot_final.ksns", snapshot_from_state(traj.final_state, config.model)
    )
    if emit_plot_data or config.output.emit_plot_data:
        written = write_plot_data(frame, out / "plot_data")
        print_info(f"Wrote {len(written)} plot data files")

    console.print()
    print_run_summary(traj)

    if traj.flagged:
        print_error(f"Run flagged: {traj.termination.value} at t = {traj.t_final:.6g}")
        sys.exit(EXIT_FLAGGED)

    try:
        _report_level_sets(config, traj, out)
    except KsflowError as e:
        print_warning(f"Level sets skipped: {e}")
    print_success("Run completed")


def _split_values(raw: tuple[str, ...]) -> list[float]:
    values = []
    for item in raw:
        values.extend(float(v) for v in item.split(",") if v.strip())
    return values


@cli.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True))
@click.option(
    "--param",
    required=True,
    type=click.Choice(SWEEP_PARAMETERS),
    help="Swept amplitude",
)
@click.option(
    "--values",
    "raw_values",
    multiple=True,
    required=True,
    help="Values, comma-separated",
)
@click.option("--workers", default=None, type=int, help="Concurrent runs")
@click.option("--output", "-o", default=None, help="Output directory")
def sweep(
    config_path: str,
    param: str,
    raw_values: tuple[str, ...],
    workers: int | None,
    output: str | None,
):
    """Classify runs over increasing initial amplitudes."""
    config = _load(config_path)
    print_header(f"ksflow - Threshold Sweep ({param})")

    try:
        values = _split_values(raw_values)
    except ValueError as e:
        print_error(f"Bad --values: {e}")
        sys.exit(EXIT_CONFIG)

    out = get_output_dir(output or config.output.directory)
    print_info(f"Running {len(values)} values")
    try:
        report = threshold_sweep(
            config.model,
            config.initial,
            param,
            values,
            SweepSettings(max_workers=workers),
            output_dir=out,
        )
    except (InvalidConfig, EmptyInput) as e:
        print_error(f"Config error: {e}")
        sys.exit(EXIT_CONFIG)

    print_sweep_report(report)
    print_success(f"Summary written to {out / f'sweep_{param}' / 'summary.csv'}")
    if report.all_flagged:
        print_error("Every run in the sweep was flagged")
        sys.exit(EXIT_FLAGGED)


@cli.command("scale-check")
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True))
@click.option("--R", "scale", required=True, type=float, help="Scale factor R > 0")
def scale_check(config_path: str, scale: float):
    """Compare the critical mixed norm of a run and its rescaled version."""
    config = _load(config_path)
    print_header("ksflow - Scaling Check")

    try:
        report = run_scaling_pair(config.model, config.initial, scale)
    except InvalidConfig as e:
        print_error(f"Config error: {e}")
        sys.exit(EXIT_CONFIG)
    except ScaledRunFailed as e:
        print_error(str(e))
        sys.exit(EXIT_FLAGGED)

    print_scaling_report(report)


@cli.command()
@click.argument("csv_path", metavar="CSV", type=click.Path(exists=True))
@click.option(
    "--decay-gamma", "gamma", required=True, type=float, help="Decay exponent"
)
@click.option("--window", nargs=2, type=float, required=True, help="Window a b")
@click.option("--split", default=None, type=float, help="Split time for the ratio")
@click.option("--field", type=click.Choice(["n", "c"]), default="n", help="Field")
def analyze(
    csv_path: str,
    gamma: float,
    window: tuple[float, float],
    split: float | None,
    field: str,
):
    """Fit a decay slope and decay envelopes from a diagnostics CSV."""
    try:
        frame = read_diagnostics_csv(csv_path)
    except InvalidSeries as e:
        print_error(str(e))
        sys.exit(EXIT_CONFIG)

    t = frame["t"].to_numpy()
    if field == "n":
        y = frame["linf_n"].to_numpy()
    else:
        y = np.maximum(frame["max_c"].abs(), frame["min_c"].abs()).to_numpy()

    slope = None
    try:
        slope = decay_fit((t, y), window)
    except (InvalidSeries, EmptyInput) as e:
        print_warning(f"No slope: {e}")

    envelopes = {}
    ratio = None
    try:
        if split is None:
            envelopes[f"[{window[0]:g}, {window[1]:g}]"] = decay_envelope_series(
                t, y, gamma, window
            )
        else:
            early = decay_envelope_series(t, y, gamma, (window[0], split))
            late = decay_envelope_series(t, y, gamma, (split, window[1]))
            envelopes[f"[{window[0]:g}, {split:g}]"] = early
            envelopes[f"[{split:g}, {window[1]:g}]"] = late
            ratio = late / early if early > 0 else None
    except EmptyInput as e:
        print_warning(f"No envelope: {e}")

    print_decay_analysis(slope, envelopes, ratio)


@cli.command("oracle-compare")
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True))
@click.option("--norm", type=click.Choice(["linf", "l2"]), default="linf", help="Norm")
def oracle_compare(config_path: str, norm: str):
    """Compare the spectral run with the finite-difference oracle."""
    config = _load(config_path)
    print_header("ksflow - Oracle Comparison")

    spectral = _run_with_progress(config)
    try:
        oracle = oracle_fd_run(config.model, config.initial)
    except DtUnderflow as e:
        print_error(f"Oracle step unstable: {e}")
        sys.exit(EXIT_FLAGGED)

    if spectral.flagged or oracle.flagged:
        print_error(
            f"Flagged run: spectral {spectral.termination.value}, "
            f"oracle {oracle.termination.value}"
        )
        sys.exit(EXIT_FLAGGED)

    try:
        frame = compare_trajectories(spectral, oracle, norm=norm)
    except (GridMismatch, EmptyInput) as e:
        print_error(str(e))
        sys.exit(EXIT_FLAGGED)
    print_comparison(frame, title=f"Spectral vs Oracle ({norm})")
    print_info(f"Largest difference: {frame['max'].max():.3e}")


if __name__ == "__main__":
    cli()
