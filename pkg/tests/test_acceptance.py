"""Reference runs of the shipped configurations."""

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from ksflow.diagnostics import (
    LevelSetSpec,
    decay_envelope,
    level_set_U,
    weighted_energy_monotone,
    xi0,
    xi_grid_from,
)
from ksflow.dynamics import Termination, run_trajectory
from ksflow.experiments import (
    convergence_study,
    identity_refinement_study,
    run_scaling_pair,
)
from ksflow.store import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SHIPPED = sorted(path.stem for path in CONFIGS.glob("*.cfg"))

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def reference_run():
    """Load and run a shipped configuration once per module."""
    cache = {}

    def run(name: str):
        if name not in cache:
            config = load_config(CONFIGS / f"{name}.cfg")
            weight = config.diagnostics.weight_spec(config.model, config.c0_max)
            traj = run_trajectory(config.model, config.initial, weight=weight)
            cache[name] = (config, traj)
        return cache[name]

    return run


class TestShippedConfigs:
    """Every shipped configuration runs to t_end."""

    @pytest.mark.parametrize("name", SHIPPED)
    def test_completes(self, reference_run, name):
        """Test that the run is not flagged."""
        config, traj = reference_run(name)
        assert traj.termination is Termination.COMPLETED
        assert traj.t_final == pytest.approx(config.model.t_end)

    @pytest.mark.parametrize("name", SHIPPED)
    def test_divergence_free(self, reference_run, name):
        """Test the spectral divergence at every accepted step."""
        _, traj = reference_run(name)
        assert traj.records_frame()["div_residual"].max() <= 1e-11


class TestSmallDataRun:
    """Conservation and monotonicity on the small-data parabolic run."""

    def test_mass_drift(self, reference_run):
        """Test relative mass drift below 1e-10."""
        _, traj = reference_run("small2d")
        mass = traj.records_frame()["mass"].to_numpy()
        assert np.max(np.abs(mass - mass[0])) <= 1e-10 * mass[0]

    def test_oxygen_range(self, reference_run):
        """Test that c stays within the range of its initial data."""
        config, traj = reference_run("small2d")
        frame = traj.records_frame()
        c0 = config.c0_max
        assert frame["min_c"].min() >= -1e-6 * c0
        assert frame["max_c"].max() <= (1 + 1e-6) * c0

    def test_weighted_energy_monotone(self, reference_run):
        """Test that int n^2 phi never grows with chi c0 below the threshold."""
        config, traj = reference_run("small2d")
        assert config.assumptions.smallness_ok(2)
        assert weighted_energy_monotone(traj.records_frame(), 1e-8)

    def test_scaling_pair(self):
        """Test the L^2 L^2 integral of n under R = 2 rescaling."""
        config = load_config(CONFIGS / "small2d.cfg")
        report = run_scaling_pair(config.model, config.initial, 2.0)
        assert report.relative_difference <= 0.02


class TestDecay:
    """Sup-norm envelopes and level sets on the long runs."""

    def test_parabolic_envelope(self, reference_run):
        """Test (1+t)^1/2 |n|_inf stays bounded by its early value."""
        config, traj = reference_run("decay2d")
        assert np.sqrt(config.model.t_end) <= config.model.grid.lx / 8
        late = decay_envelope(traj, 0.5, (5.0, 40.0))
        early = decay_envelope(traj, 0.5, (1.0, 5.0))
        assert late <= 1.1 * early

    def test_level_sets_vanish(self, reference_run):
        """Test U(xi) is nonincreasing and vanishes within 100 xi0."""
        _, traj = reference_run("decay2d")
        start = xi0(traj.samples[0], LevelSetSpec.parabolic(()))
        ls = LevelSetSpec.parabolic(xi_grid_from(start, 100.0, 50))
        u = np.array([value for _, value in level_set_U(traj, ls, traj.weight)])
        assert np.all(np.diff(u) <= 0)
        assert u.min() <= 1e-12 * u[0]

    def test_hyperbolic_envelope(self, reference_run):
        """Test (1+t) |n|_inf stays bounded by its early value with mu = 0."""
        config, traj = reference_run("decay_ph")
        assert config.model.mu == 0
        late = decay_envelope(traj, 1.0, (5.0, 40.0))
        early = decay_envelope(traj, 1.0, (1.0, 5.0))
        assert late <= 1.1 * early


class TestRefinement:
    """Oracle agreement and identity residuals under refinement."""

    def test_oracle_agreement(self):
        """Test the spectral run against oracles on N and 2N nodes."""
        config = load_config(CONFIGS / "oracle_smooth.cfg")
        assert config.model.grid.nx == 64
        frame = convergence_study(config.model, config.initial, levels=(1, 2))
        assert frame["difference"].iloc[0] <= 1e-3
        assert frame["reduction"].iloc[1] >= 3

    def test_identity_residual(self):
        """Test a reduction of at least 3 per joint (dt/2, 2N) level."""
        config = load_config(CONFIGS / "ph_small.cfg")
        stepper = replace(config.model.stepper, dt_init=0.02, dt_max=0.02)
        m = config.model.replace(stepper=stepper)
        frame = identity_refinement_study(m, config.initial, levels=3, t_star=0.4)
        assert frame["nx"].tolist() == [64, 128, 256]
        assert (frame["reduction"].iloc[1:] >= 3).all()
