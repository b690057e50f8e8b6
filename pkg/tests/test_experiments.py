"""Tests for scaling pairs, sweeps, the oracle and refinement studies."""

from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from ksflow.diagnostics import lp_norm
from ksflow.dynamics import Integrator, State, Termination, Trajectory, run_trajectory
from ksflow.errors import (
    DtUnderflow,
    EmptyInput,
    GridMismatch,
    InvalidConfig,
    NoBracket,
    NumericalBreakdown,
    ScaledRunFailed,
    WrongModel,
)
from ksflow.experiments import (
    SweepOutcome,
    SweepSettings,
    compare_trajectories,
    convergence_study,
    identity_refinement_study,
    oracle_fd_run,
    run_scaling_pair,
    threshold_sweep,
)
from ksflow.experiments import scaling as scaling_module
from ksflow.experiments import sweep as sweep_module
from ksflow.experiments.oracle import FiniteDifferenceOperators
from ksflow.experiments.scaling import relative_difference
from ksflow.experiments.studies import refined_grid, restrict_trajectory
from ksflow.experiments.sweep import scaled_for_value
from ksflow.model import (
    Blob,
    Fluid,
    InitialConditionSpec,
    ModelConfig,
    SensitivitySpec,
    StepperConfig,
    VelocityMode,
)
from ksflow.spectral import GridSpec


@pytest.fixture
def model():
    """Parabolic Stokes model on a 32-node box of side 16, run to t = 0.2."""
    return ModelConfig(
        grid=GridSpec(nx=32, ny=32, lx=16.0, ly=16.0),
        mu=1,
        fluid=Fluid.STOKES,
        grad_phi=(0.0, 0.1),
        sensitivity=SensitivitySpec(chi0=0.05, kap1=1.0),
        t_end=0.2,
        sample_interval=0.1,
        stepper=StepperConfig(dt_init=1e-3, dt_max=1e-2),
    )


@pytest.fixture
def ic():
    """Cell and oxygen blobs in the middle of the box."""
    return InitialConditionSpec(
        n_blobs=(Blob(0.5, (8.0, 8.0), 2.0),),
        c_blobs=(Blob(0.5, (8.0, 8.0), 3.0),),
    )


@pytest.fixture
def diffusion_model(model):
    """Uncoupled heat equations without fluid."""
    return model.replace(
        fluid=Fluid.NONE, sensitivity=SensitivitySpec(), grad_phi=(0.0, 0.0)
    )


def doubled_n(traj: Trajectory) -> Trajectory:
    """Copy of traj with every cell density doubled."""
    samples = [
        State.from_arrays(
            s.grid, s.t, 2 * s.n.values, s.c.values, s.u.x.values, s.u.y.values
        )
        for s in traj.samples
    ]
    return replace(traj, samples=samples)


class TestCompare:
    """Tests for compare_trajectories."""

    def test_identical(self, model, ic):
        """Test a = b gives all zeros."""
        traj = run_trajectory(model, ic)
        frame = compare_trajectories(traj, traj)
        assert list(frame.columns) == ["t", "n", "c", "u", "max"]
        assert len(frame) == len(traj.samples)
        assert (frame[["n", "c", "u", "max"]] == 0).all().all()

    def test_scaled_field(self, model, ic):
        """Test that doubling n gives a difference equal to the norm of n."""
        traj = run_trajectory(model, ic)
        frame = compare_trajectories(traj, doubled_n(traj), norm="l2")
        expected = [lp_norm(s.n, 2) for s in traj.samples]
        assert np.allclose(frame["n"], expected, rtol=1e-12)
        assert (frame["c"] == 0).all()

    def test_grid_mismatch(self, model, ic):
        """Test GridMismatch for different grids."""
        a = run_trajectory(model.replace(t_end=0.0), ic)
        other = model.replace(grid=GridSpec(nx=16, ny=16, lx=16.0, ly=16.0), t_end=0.0)
        b = run_trajectory(other, ic)
        with pytest.raises(GridMismatch):
            compare_trajectories(a, b)

    def test_unknown_norm(self, model, ic):
        """Test InvalidConfig for an unknown norm."""
        traj = run_trajectory(model.replace(t_end=0.0), ic)
        with pytest.raises(InvalidConfig):
            compare_trajectories(traj, traj, norm="h1")

    def test_no_shared_times(self, model, ic):
        """Test EmptyInput when no sample times coincide."""
        traj = run_trajectory(model.replace(t_end=0.0), ic)
        shifted = replace(traj, samples=[replace(traj.samples[0], t=1.0)])
        with pytest.raises(EmptyInput):
            compare_trajectories(traj, shifted)


class TestScaling:
    """Tests for run_scaling_pair."""

    def test_relative_difference(self):
        """Test the symmetric relative difference."""
        assert relative_difference(0.0, 0.0) == 0.0
        assert relative_difference(1.0, 2.0) == 0.5
        assert relative_difference(2.0, 1.0) == 0.5

    def test_identity_scale(self, model, ic):
        """Test R = 1 gives identical integrals."""
        report = run_scaling_pair(model, ic, 1.0)
        assert report.base_value > 0
        assert report.relative_difference == 0.0
        assert report.mass_relative_difference == 0.0

    def test_zero_data(self, model):
        """Test that vacuum gives zero integrals for any R."""
        report = run_scaling_pair(model, InitialConditionSpec(), 2.0)
        assert report.base_value == 0.0
        assert report.scaled_value == 0.0
        assert report.relative_difference == 0.0

    def test_scaled_mass_preserved(self, model, ic):
        """Test that the rescaled problem carries the same sampled mass."""
        report = run_scaling_pair(model, ic, 2.0)
        assert report.mass_relative_difference < 1e-6

    def test_flagged_run(self, model, ic, monkeypatch):
        """Test ScaledRunFailed when a run ends with a flag."""
        real_run = scaling_module.run_trajectory

        def flagged_run(m, ic):
            traj = real_run(m.replace(t_end=0.0), ic)
            traj.termination = Termination.FLAGGED_BLOWUP
            return traj

        monkeypatch.setattr(scaling_module, "run_trajectory", flagged_run)
        with pytest.raises(ScaledRunFailed):
            run_scaling_pair(model, ic, 2.0)


class TestSweep:
    """Tests for threshold_sweep."""

    @staticmethod
    def fake_runs(suspect_values):
        """Replacement for the per-value worker with scripted outcomes."""

        def run_value(m, ic, parameter, value, settings, output_dir):
            suspect = value in suspect_values
            return {
                "value": value,
                "termination": "completed",
                "t_final": m.t_end,
                "energy_monotone": None,
                "envelope_ratio": 2.0 if suspect else 1.0,
                "lp_bound_ok": None,
                "fired": "envelope" if suspect else "",
                "outcome": "suspect" if suspect else "stable",
            }

        return run_value

    def test_zero_amplitude(self, model, ic):
        """Test that a single zero amplitude is stable and brackets nothing."""
        settings = SweepSettings(max_workers=1)
        report = threshold_sweep(model, ic, "n0_l1", [0.0], settings)
        assert report.outcomes == (SweepOutcome.STABLE,)
        assert report.no_bracket
        assert report.details["termination"].iloc[0] == "completed"
        with pytest.raises(NoBracket):
            report.require_bracket()

    def test_bracket(self, model, ic, monkeypatch):
        """Test the bracket between the last stable and first suspect value."""
        monkeypatch.setattr(sweep_module, "_run_value", self.fake_runs({4.0, 8.0}))
        settings = SweepSettings(max_workers=1)
        report = threshold_sweep(model, ic, "c0_linf", [1.0, 2.0, 4.0, 8.0], settings)
        assert report.require_bracket() == (2.0, 4.0)
        assert report.anomalies == []

    def test_anomalies(self, model, ic, monkeypatch):
        """Test that stable values above the first suspect one are reported."""
        monkeypatch.setattr(sweep_module, "_run_value", self.fake_runs({2.0}))
        settings = SweepSettings(max_workers=1)
        report = threshold_sweep(model, ic, "n0_l1", [1.0, 2.0, 4.0], settings)
        assert report.bracket == (1.0, 2.0)
        assert report.anomalies == [4.0]

    def test_all_suspect(self, model, ic, monkeypatch):
        """Test that a suspect first value leaves no bracket."""
        monkeypatch.setattr(sweep_module, "_run_value", self.fake_runs({1.0, 2.0}))
        report = threshold_sweep(
            model, ic, "n0_l1", [1.0, 2.0], SweepSettings(max_workers=1)
        )
        assert report.no_bracket

    def test_summary_written(self, model, ic, tmp_path, monkeypatch):
        """Test summary.csv under sweep_<parameter>."""
        monkeypatch.setattr(sweep_module, "_run_value", self.fake_runs({2.0}))
        threshold_sweep(
            model, ic, "n0_l1", [1.0, 2.0], SweepSettings(max_workers=1), tmp_path
        )
        summary = pd.read_csv(tmp_path / "sweep_n0_l1" / "summary.csv")
        assert summary["outcome"].tolist() == ["stable", "suspect"]

    def test_rejects_unsorted(self, model, ic):
        """Test InvalidConfig for values that do not increase."""
        with pytest.raises(InvalidConfig):
            threshold_sweep(model, ic, "n0_l1", [2.0, 1.0])

    def test_rejects_empty(self, model, ic):
        """Test EmptyInput for no values."""
        with pytest.raises(EmptyInput):
            threshold_sweep(model, ic, "n0_l1", [])

    def test_rejects_unknown_parameter(self, model, ic):
        """Test InvalidConfig for an unknown parameter."""
        with pytest.raises(InvalidConfig):
            threshold_sweep(model, ic, "u0_linf", [1.0])

    def test_scaled_for_value(self, model, ic):
        """Test rescaling to a target sup norm of c and mass of n."""
        grid = model.grid
        scaled = scaled_for_value(model, ic, "c0_linf", 2.0)
        assert np.max(scaled.c_field(grid)) == pytest.approx(2.0)
        scaled = scaled_for_value(model, ic, "n0_ld2", 3.0)
        assert np.sum(scaled.n_field(grid)) * grid.cell_area == pytest.approx(3.0)

    def test_scaled_for_value_from_zero(self, model):
        """Test InvalidConfig when zero data cannot reach a nonzero value."""
        with pytest.raises(InvalidConfig):
            scaled_for_value(model, InitialConditionSpec(), "n0_l1", 1.0)

    def test_settings_defaults(self, model):
        """Test the default decay exponent and late window."""
        settings = SweepSettings()
        assert settings.resolved_gamma(model) == 0.5
        assert settings.resolved_gamma(model.replace(mu=0)) == 1.0
        assert settings.resolved_late_window(model) == (5.0, 0.2)


class TestOracle:
    """Tests for the finite-difference oracle."""

    def test_discrete_laplacian(self):
        """Test the 5-point Laplacian eigenvalue of a single harmonic."""
        grid = GridSpec(nx=32, ny=16, lx=2 * np.pi, ly=2 * np.pi)
        ops = FiniteDifferenceOperators(grid)
        x, _ = grid.mesh
        f = np.cos(2 * x)
        eigen = (2.0 - 2.0 * np.cos(2 * grid.hx)) / grid.hx**2
        assert np.allclose(ops.lap(f), -eigen * f, atol=1e-12)
        assert np.allclose(ops.poisson(ops.lap(f)), f, atol=1e-12)

    def test_zero_data(self, model):
        """Test that vacuum stays zero."""
        traj = oracle_fd_run(model, InitialConditionSpec())
        assert traj.termination is Termination.COMPLETED
        assert len(traj.samples) == 3
        for state in traj.samples:
            assert np.max(np.abs(state.n.values)) == 0.0
            assert np.max(state.u.magnitude()) == 0.0

    def test_heat_against_spectral(self, diffusion_model):
        """Test that the oracle tracks the spectral heat flow."""
        diffusion_model = diffusion_model.replace(
            grid=GridSpec(nx=64, ny=64, lx=16.0, ly=16.0)
        )
        ic = InitialConditionSpec(n_blobs=(Blob(1.0, (8.0, 8.0), 2.0),))
        spectral = run_trajectory(diffusion_model, ic)
        oracle = oracle_fd_run(diffusion_model, ic)
        frame = compare_trajectories(spectral, oracle)
        assert np.allclose(oracle.times, spectral.times)
        assert frame["n"].max() < 1e-2

    def test_mass_conserved(self, model, ic):
        """Test that the flux form conserves the cell mass."""
        frame = oracle_fd_run(model, ic).records_frame()
        mass = frame["mass"].to_numpy()
        assert np.max(np.abs(mass - mass[0])) <= 1e-10 * mass[0]

    def test_unstable_step(self, model):
        """Test DtUnderflow when the flow is too fast for the explicit step."""
        ic = InitialConditionSpec(u_mode=VelocityMode("taylor_green", 1e4))
        with pytest.raises(DtUnderflow):
            oracle_fd_run(model, ic)

    def test_shares_initial_state(self, model, ic):
        """Test that both paths start from the same dealiased densities."""
        spectral = run_trajectory(model, ic)
        frame = compare_trajectories(spectral, oracle_fd_run(model, ic))
        assert frame["t"].iloc[0] == 0.0
        assert frame["n"].iloc[0] == 0.0
        assert frame["c"].iloc[0] == 0.0


class TestStudies:
    """Tests for refinement studies."""

    def test_identity_needs_hyperbolic(self, model, ic):
        """Test WrongModel for mu = 1."""
        with pytest.raises(WrongModel):
            identity_refinement_study(model, ic)

    @pytest.mark.slow
    def test_identity_refinement(self):
        """Test that the identity residual shrinks under joint refinement."""
        m = ModelConfig(
            grid=GridSpec(nx=32, ny=32, lx=16.0, ly=16.0),
            mu=0,
            fluid=Fluid.NONE,
            sensitivity=SensitivitySpec(chi0=0.5, kap1=1.0),
            t_end=0.1,
            sample_interval=0.1,
            stepper=StepperConfig(dt_init=4e-3, dt_max=4e-3),
        )
        ic = InitialConditionSpec(
            n_blobs=(Blob(0.2, (8.0, 8.0), 2.5),),
            c_blobs=(Blob(1.0, (8.0, 8.0), 3.0),),
        )
        frame = identity_refinement_study(m, ic, levels=3)
        assert frame["nx"].tolist() == [32, 64, 128]
        residual = frame["residual"].to_numpy()
        assert np.all(np.isfinite(residual))
        assert residual[-1] < residual[0]

    @pytest.mark.slow
    def test_convergence(self, diffusion_model):
        """Test that a finer oracle grid lands closer to the spectral run."""
        ic = InitialConditionSpec(n_blobs=(Blob(1.0, (8.0, 8.0), 2.0),))
        frame = convergence_study(diffusion_model, ic, levels=(1, 2))
        assert list(frame.columns) == ["factor", "nx", "dt", "difference", "reduction"]
        assert frame["difference"].iloc[1] < frame["difference"].iloc[0]

    def test_restricted_oracle_compares(self, diffusion_model, ic):
        """Test that an oracle run on a doubled grid compares on the coarse grid."""
        m = diffusion_model.replace(t_end=0.1, sample_interval=0.1)
        oracle = oracle_fd_run(m.replace(grid=refined_grid(m.grid, 2)), ic)
        restricted = restrict_trajectory(oracle, m.grid, 2)
        assert restricted.config.grid == m.grid
        assert restricted.final_state.grid == m.grid
        frame = compare_trajectories(run_trajectory(m, ic), restricted)
        assert len(frame) == len(restricted.samples)
        assert frame["max"].max() < 1e-2

    def test_identity_negative_density(self, monkeypatch):
        """Test NumericalBreakdown when a fixed step drives n negative."""
        original = Integrator.to_state

        def shifted_to_state(self, fields_hat, t):
            s = original(self, fields_hat, t)
            return State.from_arrays(
                s.grid, s.t, s.n.values - 1.0, s.c.values, s.u.x.values, s.u.y.values
            )

        monkeypatch.setattr(Integrator, "to_state", shifted_to_state)
        m = ModelConfig(
            grid=GridSpec(nx=16, ny=16, lx=16.0, ly=16.0),
            mu=0,
            fluid=Fluid.NONE,
            sensitivity=SensitivitySpec(chi0=0.5, kap1=1.0),
            t_end=0.01,
            sample_interval=0.01,
            stepper=StepperConfig(dt_init=1e-3, dt_max=1e-3),
        )
        ic = InitialConditionSpec(
            n_blobs=(Blob(0.2, (8.0, 8.0), 2.5),),
            c_blobs=(Blob(1.0, (8.0, 8.0), 3.0),),
        )
        with pytest.raises(NumericalBreakdown, match="min n"):
            identity_refinement_study(m, ic, levels=1)
