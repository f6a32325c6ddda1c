"""
Tests for the monetary injection law.
"""
import numpy as np
import pytest

from netflation.dynamics.monetary import (
    MonetaryDomainError,
    MonetaryParams,
    bracket_fraction,
    gamma_distance_series,
    gamma_steady,
    initial_balances,
    injection_shares,
    simulate,
)


def _params(economy, pi=0.02, theta=0.5, horizon=60, preset="stationary", update_form="propagated"):
    return MonetaryParams(
        pi=pi,
        theta=theta,
        m0=initial_balances(economy, preset),
        horizon=horizon,
        update_form=update_form,
    )


class TestMonetaryParams:
    """Test the monetary parameter domain."""

    @pytest.mark.parametrize(
        "changes",
        [{"pi": -0.01}, {"theta": 0.0}, {"theta": 1.5}, {"horizon": 0}, {"update_form": "sideways"}],
    )
    def test_invalid(self, block_economy, changes):
        kwargs = dict(pi=0.02, theta=0.5, m0=np.full(4, 0.25), horizon=10)
        kwargs.update(changes)
        with pytest.raises(MonetaryDomainError):
            MonetaryParams(**kwargs)

    @pytest.mark.parametrize(
        "m0",
        [np.array([0.5, -0.1, 0.3, 0.3]), np.zeros(4), np.array([np.nan, 1.0, 1.0, 1.0])],
    )
    def test_invalid_balances(self, m0):
        with pytest.raises(MonetaryDomainError):
            MonetaryParams(pi=0.02, theta=0.5, m0=m0, horizon=10)

    def test_unknown_preset(self, block_economy):
        with pytest.raises(MonetaryDomainError, match="preset"):
            initial_balances(block_economy, "lumpy")

    def test_size_mismatch(self, block_economy):
        params = MonetaryParams(pi=0.02, theta=0.5, m0=np.ones(3), horizon=5)
        with pytest.raises(MonetaryDomainError, match="entries"):
            simulate(block_economy, params)


class TestInjectionShares:
    """Test the concave injection profile."""

    def test_on_simplex(self):
        gamma = injection_shares(np.array([1.0, 4.0, 9.0, 0.0]), 0.5)
        assert gamma.sum() == pytest.approx(1.0)
        assert (gamma >= 0).all()

    def test_theta_one_is_proportional(self):
        m = np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(injection_shares(m, 1.0), m / m.sum())

    def test_concave_flattens(self):
        m = np.array([1.0, 100.0])
        assert injection_shares(m, 0.5)[0] > injection_shares(m, 1.0)[0]


class TestSimulate:
    """Test money trajectories."""

    @pytest.mark.parametrize("update_form", ["propagated", "direct"])
    def test_mass_law(self, small_economy, update_form):
        trajectory = simulate(small_economy, _params(small_economy, update_form=update_form))
        assert trajectory.mass_law_error() < 1e-10

    @pytest.mark.parametrize("preset", ["stationary", "uniform", "degree"])
    def test_shares_on_simplex(self, small_economy, preset):
        trajectory = simulate(small_economy, _params(small_economy, preset=preset, horizon=20))
        np.testing.assert_allclose(trajectory.shares.sum(axis=1), 1.0, atol=1e-12)
        assert trajectory.balances.shape == (21, small_economy.n)

    def test_zero_inflation_keeps_stationary_balances(self, small_economy):
        trajectory = simulate(small_economy, _params(small_economy, pi=0.0, horizon=30))
        np.testing.assert_allclose(trajectory.balances[-1], trajectory.balances[0], atol=1e-8)
        np.testing.assert_allclose(trajectory.mass, 1.0, atol=1e-12)

    def test_kernel_series_is_lagged(self, block_economy):
        trajectory = simulate(block_economy, _params(block_economy, horizon=8))
        series = trajectory.injection_kernel_series()
        assert series.size == 8
        np.testing.assert_array_equal(series, trajectory.misalignment[:8])

    def test_regular_network_has_no_misalignment(self, block_economy):
        trajectory = simulate(block_economy, _params(block_economy, preset="uniform", horizon=10))
        np.testing.assert_allclose(trajectory.misalignment, 0.0, atol=1e-14)


class TestSteadyInjection:
    """Test the mean-field injection profile and its misalignment brackets."""

    def test_profile_on_simplex(self, small_economy):
        steady = gamma_steady(small_economy, _params(small_economy))
        assert steady.gamma_ub.sum() == pytest.approx(1.0)

    def test_misalignment_is_negative(self, small_economy):
        """Injections favor high-degree firms, whose d^-nu is small."""
        steady = gamma_steady(small_economy, _params(small_economy))
        assert steady.C_ub < 0
        assert steady.C_lb < 0

    def test_bracket_fraction_range(self, small_economy):
        params = _params(small_economy)
        trajectory = simulate(small_economy, params)
        steady = gamma_steady(small_economy, params)
        assert 0.0 <= bracket_fraction(trajectory, steady) <= 1.0

    def test_distance_series(self, small_economy):
        params = _params(small_economy, horizon=10)
        trajectory = simulate(small_economy, params)
        distances = gamma_distance_series(trajectory, gamma_steady(small_economy, params).gamma_ub)
        assert distances.shape == (11,)
        assert (distances >= 0).all() and (distances <= 2.0 + 1e-12).all()
