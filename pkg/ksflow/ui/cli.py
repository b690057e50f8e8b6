"""Rich-based CLI output formatting."""

import logging
from typing import Optional

import numpy as np
import pandas as pd
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table
from rich.text import Text

from ksflow.dynamics.trajectory import Trajectory
from ksflow.experiments.scaling import ScalingReport
from ksflow.experiments.sweep import SweepOutcome, SweepReport
from ksflow.model.assumptions import AssumptionReport

console = Console()
err_console = Console(stderr=True)


def configure_logging(level: str = "WARNING") -> None:
    """Send library log records to stderr through rich."""
    handler = RichHandler(console=err_console, show_path=False, markup=False)
    root = logging.getLogger("ksflow")
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level.upper())
    root.propagate = False


def print_header(title: str) -> None:
    """Print a styled header."""
    console.print()
    console.print(Panel(title, style="bold blue"))
    console.print()


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(f"[green]✓[/green] {message}")


def print_error(message: str) -> None:
    """Print an error message."""
    err_console.print(f"[red]✗[/red] {message}")


def print_warning(message: str) -> None:
    """Print a warning message."""
    console.print(f"[yellow]![/yellow] {message}")


def print_info(message: str) -> None:
    """Print an info message."""
    console.print(f"[blue]ℹ[/blue] {message}")


def _ok(flag: Optional[bool]) -> Text:
    if flag is None:
        return Text("n/a", style="dim")
    return Text("yes", style="green") if flag else Text("no", style="red")


def _num(value: Optional[float], fmt: str = ".4g") -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "n/a"
    return format(value, fmt)


def print_assumption_report(report: AssumptionReport) -> None:
    """Print the structural and smallness checks of a configuration."""
    table = Table(title="Model Assumptions", show_header=False)
    table.add_column("Check", style="cyan")
    table.add_column("Value")

    table.add_row("chi, k >= 0 on [0, cmax]", _ok(report.chi_k_signs_ok))
    table.add_row("k(0) = 0", _ok(report.k_zero_ok))
    table.add_row("(chi k)' >= 0", _ok(report.chi_k_increasing_ok))
    table.add_row("(k / chi)'' <= 0", _ok(report.k_over_chi_concave_ok))
    table.add_row("sup (chi - mu k)", _num(report.sup_chi_minus_mu_k))
    table.add_row("sup chi", _num(report.chi1_sup))
    table.add_row("max c0", _num(report.cmax))
    for p, product in sorted(report.smallness_products.items()):
        style = "green" if product <= 1.0 else "yellow"
        table.add_row(f"smallness product p={p}", Text(_num(product), style=style))

    console.print(table)
    for note in report.notes:
        print_warning(note)


def print_run_summary(traj: Trajectory) -> None:
    """Print termination and the first and last diagnostics of a run."""
    frame = traj.records_frame()
    table = Table(title="Run Summary", show_header=False)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    style = "green" if not traj.flagged else "red"
    table.add_row("Termination", Text(traj.termination.value, style=style))
    table.add_row("Steps", str(traj.steps))
    table.add_row("Final time", _num(traj.t_final, ".6g"))
    table.add_row("Samples", str(len(traj.samples)))
    if len(frame):
        first, last = frame.iloc[0], frame.iloc[-1]
        drift = abs(last["mass"] - first["mass"]) / max(abs(first["mass"]), 1e-300)
        table.add_row("Relative mass drift", _num(drift, ".3e"))
        for column in ("max_n", "max_c"):
            table.add_row(
                f"{column} (initial / final)",
                f"{first[column]:.4g} / {last[column]:.4g}",
            )
        residual = frame["div_residual"].max()
        table.add_row("Max divergence residual", _num(residual, ".3e"))

    console.print(table)


def print_scaling_report(report: ScalingReport) -> None:
    """Print the base and scaled mixed-norm integrals."""
    table = Table(title=f"Scaling Check (R = {report.R:g})")
    table.add_column("Quantity", style="cyan")
    table.add_column("Base", justify="right")
    table.add_column("Scaled", justify="right")
    table.add_column("Rel. diff", justify="right", style="yellow")

    table.add_row(
        "int |n|_2^2 dt",
        _num(report.base_value, ".8g"),
        _num(report.scaled_value, ".8g"),
        _num(report.relative_difference, ".3e"),
    )
    table.add_row(
        "mass",
        _num(report.base_mass, ".8g"),
        _num(report.scaled_mass, ".8g"),
        _num(report.mass_relative_difference, ".3e"),
    )
    console.print(table)


def print_sweep_report(report: SweepReport) -> None:
    """Print per-value outcomes and the bracket of a threshold sweep."""
    table = Table(title=f"Threshold Sweep: {report.parameter}")
    table.add_column("Value", justify="right", style="cyan")
    table.add_column("Termination")
    table.add_column("Energy monotone", justify="center")
    table.add_column("Envelope ratio", justify="right")
    table.add_column("Outcome", style="bold")

    for row in report.details.itertuples(index=False):
        outcome = Text(
            row.outcome,
            style="green" if row.outcome == SweepOutcome.STABLE.value else "red",
        )
        energy = None if pd.isna(row.energy_monotone) else bool(row.energy_monotone)
        ratio = None if pd.isna(row.envelope_ratio) else float(row.envelope_ratio)
        table.add_row(
            f"{row.value:.6g}",
            row.termination,
            _ok(energy),
            _num(ratio, ".4f"),
            outcome,
        )
    console.print(table)

    if report.no_bracket:
        print_warning("No stable-to-suspect transition among the tested values")
    else:
        low, high = report.bracket
        print_success(f"Threshold bracket: [{low:.6g}, {high:.6g}]")
    if report.anomalies:
        print_warning(
            "Stable above the first suspect value: "
            + ", ".join(f"{v:.6g}" for v in report.anomalies)
        )


def print_comparison(frame: pd.DataFrame, title: str = "Trajectory Difference") -> None:
    """Print a per-sample difference table."""
    table = Table(title=title)
    for column in frame.columns:
        style = "cyan" if column == "t" else None
        table.add_column(column, justify="right", style=style)
    for row in frame.itertuples(index=False):
        cells = [f"{row[0]:.6g}"] + [f"{v:.3e}" for v in row[1:]]
        table.add_row(*cells)
    console.print(table)


def print_decay_analysis(
    slope: Optional[float],
    envelopes: dict[str, float],
    ratio: Optional[float],
) -> None:
    """Print a fitted decay slope and envelope values."""
    if slope is not None:
        console.print(f"slope: {slope:.6f}")
    for label, value in envelopes.items():
        console.print(f"envelope {label}: {value:.6g}")
    if ratio is not None:
        console.print(f"envelope ratio: {ratio:.6f}")


def create_progress() -> Progress:
    """Create a progress bar for long operations."""
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
        console=console,
    )
