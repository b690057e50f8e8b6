"""Tests for the diagnostics module."""

from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from ksflow.diagnostics import (
    CSV_COLUMNS,
    LevelSetSpec,
    MixedNormSpec,
    WeightSource,
    WeightSpec,
    compute_record,
    critical_pair_ok,
    decay_envelope,
    decay_envelope_series,
    decay_fit,
    energy_functional,
    entropy,
    formula_beta,
    grad_c_criterion,
    kinetic_energy,
    level_set_constants,
    level_set_dU,
    level_set_E,
    level_set_U,
    lp_growth_bound,
    lp_norm,
    mixed_norm_integral,
    moment_centered,
    serrin_velocity_pair_ok,
    truncated_energy,
    truncated_identity_residual,
    vorticity,
    weight_ode,
    weighted_energy,
    weighted_energy_monotone,
    weighted_identity_residual,
    xi0,
    xi_grid_from,
)
from ksflow.dynamics import State, Trajectory
from ksflow.errors import (
    EmptyInput,
    InvalidConfig,
    InvalidExponent,
    InvalidSeries,
    OutOfDomain,
    StaleState,
    WrongModel,
)
from ksflow.model import Blob, Fluid, ModelConfig, SensitivitySpec
from ksflow.spectral import GridSpec, ScalarField, VectorField


@pytest.fixture
def grid():
    """32x32 box of side 2*pi."""
    return GridSpec(nx=32, ny=32, lx=2 * np.pi, ly=2 * np.pi)


@pytest.fixture
def hyperbolic_model(grid):
    """mu = 0 model without fluid, chi = 1, k(c) = c."""
    return ModelConfig(
        grid=grid,
        mu=0,
        fluid=Fluid.NONE,
        sensitivity=SensitivitySpec(chi0=1.0, kap1=1.0),
    )


def state_from(grid: GridSpec, t: float, n, c=0.0) -> State:
    """State at rest with the given (broadcast) n and c."""
    zeros = np.zeros(grid.shape)
    n = np.broadcast_to(np.asarray(n, dtype=float), grid.shape).copy()
    c = np.broadcast_to(np.asarray(c, dtype=float), grid.shape).copy()
    return State.from_arrays(grid, t, n, c, zeros, zeros)


def trajectory_of(model: ModelConfig, states: list[State], weight=None) -> Trajectory:
    """Trajectory holding the given states as samples and records."""
    weight = weight or WeightSpec.ode()
    return Trajectory(
        config=model,
        initial=None,
        weight=weight,
        samples=list(states),
        records=[compute_record(s, model, weight, 0.0) for s in states],
        final_state=states[-1] if states else None,
    )


def bump(grid: GridSpec) -> np.ndarray:
    """Smooth positive bump exp(cos x + cos y)."""
    x, y = grid.mesh
    return np.exp(np.cos(x) + np.cos(y))


class TestNorms:
    """Tests for single-state norms and functionals."""

    def test_lp_norm_constant(self, grid):
        """Test |a|_p = a A^(1/p) on a box of area A."""
        f = ScalarField.constant(grid, 3.0)
        for p in (1.0, 2.0, 4.0):
            assert lp_norm(f, p) == pytest.approx(3.0 * grid.area ** (1.0 / p))

    def test_lp_norm_spike(self, grid):
        """Test the sup norm of a single spike."""
        values = np.zeros(grid.shape)
        values[3, 5] = 5.0
        assert lp_norm(ScalarField(grid, values), np.inf) == 5.0

    def test_lp_norm_rejects_small_exponent(self, grid):
        """Test InvalidExponent for p < 1."""
        with pytest.raises(InvalidExponent):
            lp_norm(ScalarField.zeros(grid), 0.5)

    def test_entropy_constant(self, grid):
        """Test n = a gives a A ln a and n = 1 gives 0."""
        assert entropy(state_from(grid, 0.0, 2.0)) == pytest.approx(
            2.0 * grid.area * np.log(2.0)
        )
        assert entropy(state_from(grid, 0.0, 1.0)) == 0.0

    def test_energy_functional_uniform(self, grid):
        """Test that uniform n = e at rest leaves only the n |ln n| term."""
        state = state_from(grid, 0.0, np.e)
        assert energy_functional(state) == pytest.approx(np.e * grid.area)
        assert energy_functional(state_from(grid, 0.0, 1.0)) == 0.0

    def test_entropy_of_zero(self, grid):
        """Test that vacuum has zero entropy."""
        assert entropy(state_from(grid, 0.0, 0.0)) == 0.0

    def test_flagged_state_refused(self, grid):
        """Test StaleState for flagged states."""
        with pytest.raises(StaleState):
            entropy(state_from(grid, 0.0, 1.0).mark_flagged())

    def test_vorticity_shear(self, grid):
        """Test u = (0, sin x) gives omega = cos x."""
        x, _ = grid.mesh
        u = VectorField.from_arrays(grid, np.zeros(grid.shape), np.sin(x))
        assert np.allclose(vorticity(u).values, np.cos(x), atol=1e-12)

    def test_vorticity_of_gradient(self, grid):
        """Test that a gradient field has no vorticity."""
        x, y = grid.mesh
        u = VectorField.from_arrays(grid, np.cos(x) * np.sin(y), np.sin(x) * np.cos(y))
        assert np.max(np.abs(vorticity(u).values)) < 1e-12

    def test_kinetic_energy_uniform(self, grid):
        """Test |u|^2 = A for a unit uniform flow."""
        u = VectorField.from_arrays(grid, np.ones(grid.shape), np.zeros(grid.shape))
        assert kinetic_energy(u) == pytest.approx(grid.area)

    def test_moment_zero(self, grid):
        """Test that the moment of vacuum is zero."""
        assert moment_centered(state_from(grid, 0.0, 0.0)) == 0.0

    def test_moment_concentrated(self):
        """Test that a narrow central blob has moment close to its mass."""
        grid = GridSpec(nx=256, ny=256, lx=2.0, ly=2.0)
        blob = Blob(1.0, (1.0, 1.0), 0.05)
        state = state_from(grid, 0.0, blob.evaluate(grid))
        assert moment_centered(state) == pytest.approx(blob.mass, rel=1e-2)


class TestWeights:
    """Tests for weights and the weighted energy."""

    def test_formula_beta(self):
        """Test beta^2 = 6 p (p - 1) chi1^2 = 0.12 for chi1 = 0.1, p = 2."""
        assert formula_beta(2.0, 0.1) ** 2 == pytest.approx(0.12)

    def test_zero_oxygen_reduces_to_lp(self, grid):
        """Test c = 0 gives |n|_p^p."""
        sens = SensitivitySpec(chi0=0.1)
        state = state_from(grid, 0.0, bump(grid))
        w = WeightSpec.from_formula(2.0, 0.1, 0.0)
        expected = lp_norm(state.n, 2.0) ** 2
        assert weighted_energy(state, w, sens) == pytest.approx(expected)

    def test_constant_oxygen_factors_out(self, grid):
        """Test constant c = 1, beta = 0.5 gives e^0.25 |n|_p^p."""
        state = state_from(grid, 0.0, bump(grid), 1.0)
        w = WeightSpec.manual(2.0, 0.5)
        expected = np.exp(0.25) * lp_norm(state.n, 2.0) ** 2
        assert weighted_energy(state, w, SensitivitySpec()) == pytest.approx(expected)

    def test_formula_mismatch(self, grid):
        """Test InvalidConfig when a formula beta disagrees with chi."""
        w = WeightSpec(p=2.0, beta=1.0, source=WeightSource.FORMULA, cmax=1.0)
        with pytest.raises(InvalidConfig):
            weighted_energy(state_from(grid, 0.0, 1.0), w, SensitivitySpec(chi0=0.1))

    def test_ode_weight_rejected(self, grid):
        """Test that weighted_energy refuses the ode weight."""
        with pytest.raises(InvalidConfig):
            weighted_energy(
                state_from(grid, 0.0, 1.0), WeightSpec.ode(), SensitivitySpec()
            )

    def test_exponent_below_two(self):
        """Test InvalidExponent for p < 2."""
        with pytest.raises(InvalidExponent):
            WeightSpec(p=1.5)

    def test_ode_weight_solves_ode(self):
        """Test phi = exp(chi0 c + chi1 c^2 / 2)."""
        sens = SensitivitySpec(chi0=0.5, chi1_lin=0.2)
        c = np.linspace(0.0, 2.0, 5)
        assert np.allclose(weight_ode(c, sens), np.exp(0.5 * c + 0.1 * c**2))

    def test_growth_bound(self):
        """Test exp(beta^2 c0^2) times the initial integral."""
        assert lp_growth_bound(2.0, 0.5, 2.0, 3.0) == pytest.approx(3.0 * np.e)


class TestIdentities:
    """Tests for the weighted and truncated energy equalities."""

    def test_zero_state(self, grid, hyperbolic_model):
        """Test that vacuum has zero residual."""
        a = state_from(grid, 0.0, 0.0)
        b = state_from(grid, 0.1, 0.0)
        w = WeightSpec.ode()
        assert weighted_identity_residual(a, b, w, hyperbolic_model) == 0.0
        assert truncated_identity_residual(a, b, w, 0.5, hyperbolic_model) == 0.0

    def test_uniform_consumption(self, grid, hyperbolic_model):
        """Test the equality on the exact uniform solution c = exp(-t)."""
        dt = 1e-3
        a = state_from(grid, 0.2, 1.0, np.exp(-0.2))
        b = state_from(grid, 0.2 + dt, 1.0, np.exp(-0.2 - dt))
        residual = weighted_identity_residual(a, b, WeightSpec.ode(), hyperbolic_model)
        assert residual < 1e-4

    def test_uniform_residual_order(self, grid, hyperbolic_model):
        """Test the uniform-state residual is O(dt) at two step sizes."""
        w = WeightSpec.ode()
        residuals = []
        for dt in (1e-2, 5e-3):
            a = state_from(grid, 0.2, 1.0, np.exp(-0.2))
            b = state_from(grid, 0.2 + dt, 1.0, np.exp(-0.2 - dt))
            residual = weighted_identity_residual(a, b, w, hyperbolic_model)
            assert residual <= dt
            residuals.append(residual)
        assert residuals[1] <= 0.6 * residuals[0]

    def test_wrong_time_order(self, grid, hyperbolic_model):
        """Test InvalidSeries when states are not ordered in time."""
        a = state_from(grid, 0.1, 1.0)
        with pytest.raises(InvalidSeries):
            weighted_identity_residual(a, a, WeightSpec.ode(), hyperbolic_model)

    def test_parabolic_rejected(self, grid, hyperbolic_model):
        """Test WrongModel for mu = 1."""
        a = state_from(grid, 0.0, 1.0)
        b = state_from(grid, 0.1, 1.0)
        parabolic = hyperbolic_model.replace(mu=1)
        with pytest.raises(WrongModel):
            weighted_identity_residual(a, b, WeightSpec.ode(), parabolic)

    def test_gaussian_rejected(self, grid, hyperbolic_model):
        """Test WrongModel for the Gaussian weight."""
        a = state_from(grid, 0.0, 1.0)
        b = state_from(grid, 0.1, 1.0)
        gaussian = WeightSpec.manual(2.0, 0.1)
        with pytest.raises(WrongModel):
            weighted_identity_residual(a, b, gaussian, hyperbolic_model)

    def test_truncated_energy_levels(self, grid, hyperbolic_model):
        """Test K = 0 gives int (n/phi)^p phi and K above max(n/phi) gives 0."""
        sens = hyperbolic_model.sensitivity
        x, _ = grid.mesh
        c = 0.5 + 0.5 * np.sin(x)
        state = state_from(grid, 0.0, bump(grid), c)
        w = WeightSpec.ode(p=3.0)
        phi = weight_ode(c, sens)
        expected = np.sum((state.n.values / phi) ** 3 * phi) * grid.cell_area
        assert truncated_energy(state, w, 0.0, sens) == pytest.approx(expected)
        top = float(np.max(state.n.values / phi))
        assert truncated_energy(state, w, top, sens) == 0.0
        assert truncated_energy(state, w, np.inf, sens) == 0.0

    def test_truncated_energy_negative_level(self, grid, hyperbolic_model):
        """Test OutOfDomain for K < 0."""
        with pytest.raises(OutOfDomain):
            truncated_energy(
                state_from(grid, 0.0, 1.0),
                WeightSpec.ode(),
                -1.0,
                hyperbolic_model.sensitivity,
            )


class TestCriteria:
    """Tests for space-time criteria."""

    def test_constant_mixed_norm(self, grid, hyperbolic_model):
        """Test n = a over [0, T] gives T a^2 A for p = q = 2."""
        states = [state_from(grid, t, 2.0) for t in np.linspace(0.0, 1.5, 4)]
        traj = trajectory_of(hyperbolic_model, states)
        value = mixed_norm_integral(traj, MixedNormSpec(2.0, 2.0))
        assert value.value == pytest.approx(1.5 * 4.0 * grid.area)
        assert (value.t_start, value.t_end) == (0.0, 1.5)

    def test_zero_mixed_norm(self, grid, hyperbolic_model):
        """Test that vacuum gives zero."""
        states = [state_from(grid, t, 0.0) for t in (0.0, 1.0)]
        traj = trajectory_of(hyperbolic_model, states)
        assert mixed_norm_integral(traj, MixedNormSpec(2.0, 2.0)).value == 0.0

    def test_empty_trajectory(self, hyperbolic_model):
        """Test EmptyInput for a trajectory without samples."""
        traj = Trajectory(
            config=hyperbolic_model, initial=None, weight=WeightSpec.ode()
        )
        with pytest.raises(EmptyInput):
            mixed_norm_integral(traj, MixedNormSpec(2.0, 2.0))

    def test_grad_c(self, grid, hyperbolic_model):
        """Test |grad sin x|_inf = 1 integrates to T."""
        x, _ = grid.mesh
        states = [state_from(grid, t, 1.0, 1.0 + np.sin(x)) for t in (0.0, 0.5, 1.0)]
        traj = trajectory_of(hyperbolic_model, states)
        assert grad_c_criterion(traj).value == pytest.approx(1.0, rel=1e-6)

    def test_critical_pairs(self):
        """Test the scaling-critical exponent pairs."""
        spec = MixedNormSpec.critical(2.0)
        assert spec.q == 2.0 and spec.is_critical
        assert MixedNormSpec.critical(4.0).q == pytest.approx(4.0 / 3.0)
        assert MixedNormSpec.hyperbolic_2d().scaling_sum == 1.0
        assert critical_pair_ok(3.0, 2.0, d=3)
        assert not critical_pair_ok(1.0, 2.0, d=3)
        assert serrin_velocity_pair_ok(np.inf, 2.0)
        assert not serrin_velocity_pair_ok(3.0, 2.0)

    def test_no_critical_time_exponent(self):
        """Test InvalidExponent when d/p >= 2."""
        with pytest.raises(InvalidExponent):
            MixedNormSpec.critical(1.0)


class TestDecay:
    """Tests for decay envelopes and fits."""

    def test_exact_power_envelope(self):
        """Test y = (1+t)^-gamma gives envelope 1."""
        t = np.linspace(0.0, 10.0, 101)
        envelope = decay_envelope_series(t, (1 + t) ** -0.5, 0.5, (1.0, 10.0))
        assert envelope == pytest.approx(1.0)

    def test_zero_gamma_is_max(self):
        """Test gamma = 0 gives the window maximum."""
        t = np.linspace(0.0, 4.0, 41)
        y = np.exp(-((t - 2.0) ** 2))
        assert decay_envelope_series(t, y, 0.0, (1.0, 3.0)) == pytest.approx(1.0)

    def test_empty_window(self):
        """Test EmptyInput for windows without samples."""
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(EmptyInput):
            decay_envelope_series(t, t, 0.5, (2.0, 3.0))
        with pytest.raises(EmptyInput):
            decay_envelope_series(t, t, 0.5, (1.0, 1.0))

    def test_envelope_from_records(self, grid, hyperbolic_model):
        """Test the trajectory envelope reads the per-step sup norms."""
        states = [state_from(grid, t, 2.0) for t in (0.0, 1.0, 2.0, 3.0)]
        traj = trajectory_of(hyperbolic_model, states)
        assert decay_envelope(traj, 0.0, (1.0, 3.0)) == pytest.approx(2.0)

    def test_fit_exact_power(self):
        """Test slope -0.5 for y = (1+t)^-0.5."""
        t = np.linspace(0.0, 20.0, 201)
        slope = decay_fit((t, (1 + t) ** -0.5), (1.0, 20.0))
        assert slope == pytest.approx(-0.5, abs=1e-10)

    def test_fit_constant(self):
        """Test slope 0 for a constant series."""
        t = np.linspace(0.0, 5.0, 51)
        slope = decay_fit((t, np.full_like(t, 2.0)), (0.0, 5.0))
        assert slope == pytest.approx(0.0, abs=1e-10)

    def test_fit_noisy(self):
        """Test slope -1 within 0.02 under 1% multiplicative noise."""
        rng = np.random.default_rng(7)
        t = np.linspace(0.0, 50.0, 501)
        y = 3.0 / (1 + t) * (1 + 0.01 * rng.standard_normal(t.size))
        assert decay_fit((t, y), (1.0, 50.0)) == pytest.approx(-1.0, abs=0.02)

    def test_fit_frame_input(self):
        """Test that a DataFrame with t and y columns is accepted."""
        t = np.linspace(0.0, 10.0, 50)
        frame = pd.DataFrame({"t": t, "y": (1 + t) ** -2.0})
        assert decay_fit(frame, (0.0, 10.0)) == pytest.approx(-2.0, abs=1e-10)

    def test_fit_rejects_nonpositive(self):
        """Test InvalidSeries for zero values."""
        t = np.linspace(0.0, 5.0, 51)
        with pytest.raises(InvalidSeries):
            decay_fit((t, np.zeros_like(t)), (0.0, 5.0))

    def test_fit_needs_samples(self):
        """Test InvalidSeries for too few samples in the window."""
        t = np.linspace(0.0, 5.0, 6)
        with pytest.raises(InvalidSeries):
            decay_fit((t, 1 + t), (0.0, 5.0))


class TestLevelSets:
    """Tests for the level-set energies."""

    @pytest.fixture
    def bump_trajectory(self, grid, hyperbolic_model):
        """A bump of n that halves over [0, 1]."""
        model = hyperbolic_model.replace(mu=1)
        times = np.linspace(0.0, 1.0, 5)
        states = [state_from(grid, t, bump(grid) / (1 + t)) for t in times]
        return trajectory_of(model, states, WeightSpec.manual(2.0, 0.0))

    def test_zero_trajectory(self, grid, hyperbolic_model):
        """Test U = 0 for vacuum."""
        states = [state_from(grid, t, 0.0) for t in (0.0, 1.0)]
        traj = trajectory_of(hyperbolic_model, states)
        ls = LevelSetSpec.hyperbolic((0.1, 1.0, 10.0))
        assert [u for _, u in level_set_U(traj, ls, traj.weight)] == [0.0, 0.0, 0.0]

    def test_nonincreasing_and_vanishing(self, bump_trajectory):
        """Test U decreases in xi and vanishes above the sup of the profile."""
        start = xi0(bump_trajectory.samples[0], LevelSetSpec.parabolic(()))
        ls = LevelSetSpec.parabolic(xi_grid_from(start / 10, 100.0, 30))
        pairs = level_set_U(bump_trajectory, ls, bump_trajectory.weight)
        values = [u for _, u in pairs]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert values[0] > 0
        assert values[-1] == 0.0

    def test_derivative_matches_difference(self, bump_trajectory):
        """Test U'(xi) against a central difference of U."""
        xi, delta = 2.0, 1e-5
        ls = LevelSetSpec.parabolic((xi - delta, xi, xi + delta))
        w = bump_trajectory.weight
        u = [v for _, v in level_set_U(bump_trajectory, ls, w)]
        du = level_set_dU(bump_trajectory, ls, w)[1][1]
        assert du < 0
        assert du == pytest.approx((u[2] - u[0]) / (2 * delta), rel=1e-4)

    def test_energy_vanishes_above_sup(self, bump_trajectory):
        """Test E(xi) = 0 once no level is exceeded."""
        start = xi0(bump_trajectory.samples[0], LevelSetSpec.parabolic(()))
        ls = LevelSetSpec.parabolic((start / 2, 2 * start))
        values = level_set_E(bump_trajectory, ls, bump_trajectory.weight)
        assert values[0][1] > 0
        assert values[1][1] == 0.0

    def test_truncation_level(self, grid, hyperbolic_model):
        """Test that K lowers the profile to (n - K)+ before the levels apply."""
        model = hyperbolic_model.replace(mu=1)
        states = [state_from(grid, t, 2.0) for t in (0.0, 1.0)]
        traj = trajectory_of(model, states, WeightSpec.manual(2.0, 0.0))
        ls = replace(LevelSetSpec.parabolic((1.0,)), K=0.5)
        expected = 0.5 * grid.area * ((1.5 - 1.0) ** 2 + 0.5 * (1.5 - 2**-0.5) ** 2)
        assert level_set_U(traj, ls, traj.weight)[0][1] == pytest.approx(expected)
        above = replace(ls, K=2.0)
        assert level_set_U(traj, above, traj.weight)[0][1] == 0.0
        assert level_set_E(traj, above, traj.weight)[0][1] == 0.0

    def test_empty_grid(self, bump_trajectory):
        """Test EmptyInput for an empty level grid."""
        with pytest.raises(EmptyInput):
            level_set_U(
                bump_trajectory, LevelSetSpec.parabolic(()), bump_trajectory.weight
            )

    def test_unknown_variant(self, bump_trajectory):
        """Test InvalidConfig for an unknown variant."""
        ls = LevelSetSpec.parabolic((1.0,))
        with pytest.raises(InvalidConfig):
            level_set_U(bump_trajectory, ls, bump_trajectory.weight, "c")

    def test_auxiliary_functions(self):
        """Test the exponents of the parabolic and hyperbolic families."""
        ls = LevelSetSpec.parabolic((1.0,))
        assert (ls.nu_exponent, ls.eta_exponent) == (-1.0, -0.5)
        first = LevelSetSpec.hyperbolic((1.0,), p=3.0, choice="first")
        assert first.nu_exponent == pytest.approx(2.0 / 3.0)
        with pytest.raises(InvalidConfig):
            LevelSetSpec.hyperbolic((1.0,), p=2.0, choice="first")

    def test_grid_validation(self):
        """Test that the xi grid must increase."""
        with pytest.raises(InvalidConfig):
            LevelSetSpec.parabolic((2.0, 1.0))
        assert xi_grid_from(1.0, 100.0, 3) == pytest.approx((1.0, 10.0, 100.0))
        with pytest.raises(InvalidConfig):
            xi_grid_from(0.0)

    def test_xi0(self, grid):
        """Test xi0 = max(|n0|_inf, |c0|_inf) at eta(0) = 1."""
        state = state_from(grid, 0.0, 2.0, 1.0)
        assert xi0(state, LevelSetSpec.parabolic(())) == 2.0

    def test_constants(self, bump_trajectory):
        """Test K1 and the exponent table."""
        ls = LevelSetSpec.parabolic((1.0, 3.0))
        weight = WeightSpec.manual(2.0, 0.0)
        constants = level_set_constants(bump_trajectory, ls, weight)
        assert constants["K1"] == pytest.approx(3.0)
        assert constants["q"] == pytest.approx(4.0)
        assert constants["alpha_parabolic"] == pytest.approx(2.0 / 3.0)


class TestRecords:
    """Tests for per-step records."""

    def test_columns(self):
        """Test the CSV column order."""
        assert ",".join(CSV_COLUMNS) == (
            "t,mass,l1_n,l2_n,l4_n,linf_n,l2_grad_c,l2_vorticity,kinetic,entropy,"
            "min_n,max_n,min_c,max_c,div_residual,weighted_energy,dt"
        )

    def test_constant_state(self, grid, hyperbolic_model):
        """Test the record of a uniform state."""
        state = state_from(grid, 0.5, 2.0, 1.0)
        record = compute_record(state, hyperbolic_model, WeightSpec.ode(), 0.01)
        assert record.t == 0.5
        assert record.mass == pytest.approx(2.0 * grid.area)
        assert record.linf_n == 2.0
        assert record.l2_grad_c == pytest.approx(0.0, abs=1e-12)
        assert record.kinetic == 0.0
        assert record.div_residual == 0.0
        assert record.dt == 0.01

    def test_energy_monotone(self):
        """Test the relative monotonicity check."""
        falling = pd.DataFrame({"weighted_energy": [3.0, 2.0, 2.0, 1.0]})
        rising = pd.DataFrame({"weighted_energy": [3.0, 2.0, 2.5]})
        assert weighted_energy_monotone(falling)
        assert not weighted_energy_monotone(rising)
        assert weighted_energy_monotone(falling.iloc[:1])
