"""
Tests for flexible and sticky price paths.
"""
import numpy as np
import pytest
from scipy import stats

from netflation.dynamics.monetary import MonetaryParams, initial_balances, simulate
from netflation.dynamics.pricing import (
    HazardSpec,
    PricingError,
    flexible_prices,
    gap_hazard,
    geometric_vintage_weights,
    hazard,
    reset_frequency,
    sticky_prices,
    sticky_replications,
    synchronization_index,
    vintage_weights,
)


@pytest.fixture(scope="module")
def trajectory(small_economy):
    return _trajectory(small_economy, 0.02)


def _trajectory(economy, pi, total=1.0, horizon=40):
    params = MonetaryParams(pi=pi, theta=0.5, m0=initial_balances(economy, total=total), horizon=horizon)
    return simulate(economy, params)


class TestHazardSpec:
    """Test the reset hazard."""

    @pytest.mark.parametrize(
        "changes",
        [
            {"g_scale": 0.0},
            {"epsilon_cap": 1.0},
            {"c0": 0.0},
            {"c0": 0.7, "c1": 0.6},
            {"c1": 1.2},
            {"c0": 0.4, "c1": 0.4},
            {"c1": 1.0},
            {"kappa_f": 0.0},
            {"driver": "mood"},
        ],
    )
    def test_invalid(self, changes):
        with pytest.raises(PricingError):
            HazardSpec(**changes)

    def test_equal_exposure_bounds(self):
        spec = HazardSpec(c0=0.4, c1=0.4, allow_degenerate=True)
        np.testing.assert_allclose(spec.f(np.array([-1.0, 0.0, 3.0])), 0.4)

    def test_degenerate_still_bounded(self):
        with pytest.raises(PricingError):
            HazardSpec(c0=0.7, c1=0.6, allow_degenerate=True)
        with pytest.raises(PricingError):
            HazardSpec(c1=1.1, allow_degenerate=True)

    def test_scalar_in_scalar_out(self):
        value = hazard(HazardSpec(), 0.02, 3, 0.1)
        assert isinstance(value, float)
        assert 0.0 <= value <= 1.0

    def test_zero_age_never_resets(self):
        assert hazard(HazardSpec(), 0.02, 0, 0.5) == 0.0

    def test_cap(self):
        spec = HazardSpec()
        cap = spec.age_cap(0.02)
        assert cap == pytest.approx(-0.05 * np.log(0.01) / 0.02)
        assert hazard(spec, 0.02, np.ceil(cap), 0.0) == pytest.approx(spec.c0)

    def test_no_cap_without_inflation(self):
        assert HazardSpec().age_cap(0.0) == float("inf")
        assert hazard(HazardSpec(), 0.0, 50, 0.2) == 0.0

    def test_increasing_in_age_and_exposure(self):
        spec = HazardSpec()
        ages = np.arange(1, 10)
        values = hazard(spec, 0.02, ages, 0.1)
        assert np.all(np.diff(values) >= 0)
        assert hazard(spec, 0.02, 3, 0.5) > hazard(spec, 0.02, 3, 0.0)

    def test_negative_age(self):
        with pytest.raises(PricingError):
            hazard(HazardSpec(), 0.02, -1, 0.0)

    def test_gap_hazard(self):
        spec = HazardSpec(driver="gap")
        assert gap_hazard(spec, 0.0, 0.3) == 0.0
        assert gap_hazard(spec, -0.1, 0.3) == pytest.approx(gap_hazard(spec, 0.1, 0.3))


class TestFlexiblePrices:
    """Test market-clearing prices."""

    def test_every_firm_resets(self, small_economy, trajectory):
        path = flexible_prices(small_economy, trajectory)
        assert path.reset_flags.all()
        assert (path.ages == 0).all()
        assert (path.last_reset == path.horizon).all()
        np.testing.assert_array_equal(path.prices, path.market_clearing)

    def test_clears_markets(self, small_economy, trajectory):
        path = flexible_prices(small_economy, trajectory)
        np.testing.assert_allclose(path.prices * small_economy.quantities, trajectory.nominal_demand)
        np.testing.assert_allclose(path.unsold, 0.0, atol=1e-9)
        np.testing.assert_allclose(path.fill_rate, 1.0)

    def test_homogeneous_in_money(self, small_economy, trajectory):
        doubled = _trajectory(small_economy, 0.02, total=2.0)
        base = flexible_prices(small_economy, trajectory)
        np.testing.assert_allclose(flexible_prices(small_economy, doubled).prices, 2.0 * base.prices, rtol=1e-10)


class TestStickyPrices:
    """Test posted prices under the local hazard."""

    def test_deterministic(self, small_economy, trajectory):
        a = sticky_prices(small_economy, trajectory, HazardSpec(), seed=11)
        b = sticky_prices(small_economy, trajectory, HazardSpec(), seed=11)
        np.testing.assert_array_equal(a.prices, b.prices)
        np.testing.assert_array_equal(a.reset_flags, b.reset_flags)

    def test_carry_forward(self, small_economy, trajectory):
        path = sticky_prices(small_economy, trajectory, HazardSpec(), seed=3)
        np.testing.assert_array_equal(path.prices[0], path.market_clearing[0])
        for t in range(1, path.horizon + 1):
            kept = ~path.reset_flags[t]
            np.testing.assert_array_equal(path.prices[t, kept], path.prices[t - 1, kept])
            np.testing.assert_array_equal(path.prices[t, ~kept], path.market_clearing[t, ~kept])
            np.testing.assert_array_equal(path.ages[t, kept], path.ages[t - 1, kept] + 1)
            assert (path.ages[t, ~kept] == 0).all()

    def test_vintages(self, small_economy, trajectory):
        path = sticky_prices(small_economy, trajectory, HazardSpec(), seed=3)
        vintages = path.vintages()
        assert (vintages >= 0).all()
        np.testing.assert_array_equal(vintages[-1], path.last_reset)

    def test_certain_resets_match_flexible(self, small_economy, trajectory):
        spec = HazardSpec(g_scale=1e-6, c0=1.0, c1=1.0, allow_degenerate=True)
        sticky = sticky_prices(small_economy, trajectory, spec, seed=5)
        flexible = flexible_prices(small_economy, trajectory)
        np.testing.assert_array_equal(sticky.prices, flexible.prices)
        assert reset_frequency(sticky) == 1.0
        assert synchronization_index(sticky) == 1.0

    def test_resets_independent_of_degree(self, small_economy, trajectory):
        # constant exposure: who resets must not depend on degree
        spec = HazardSpec(g_scale=0.01, c0=0.5, c1=0.5, allow_degenerate=True)
        degrees = small_economy.degrees.degrees
        for replication in range(3):
            path = sticky_prices(
                small_economy, trajectory, spec, seed=small_economy.params.seed, replication=replication
            )
            first = path.reset_flags[1]
            assert 0 < first.sum() < small_economy.n
            rho, _ = stats.spearmanr(degrees, first)
            assert abs(rho) < 0.3

    def test_routes_through_hazard(self, small_economy, trajectory, monkeypatch):
        monkeypatch.setattr("netflation.dynamics.pricing.hazard", lambda spec, pi, age, delta: np.zeros_like(delta))
        path = sticky_prices(small_economy, trajectory, HazardSpec(), seed=3)
        assert reset_frequency(path) == 0.0

    def test_reset_frequency_rises_with_inflation(self, small_economy, trajectory):
        faster = _trajectory(small_economy, 0.04)
        low = sticky_prices(small_economy, trajectory, HazardSpec(), seed=8)
        high = sticky_prices(small_economy, faster, HazardSpec(), seed=8)
        assert reset_frequency(high) > reset_frequency(low)

    def test_gap_driver(self, small_economy, trajectory):
        path = sticky_prices(small_economy, trajectory, HazardSpec(driver="gap"), seed=2)
        assert 0.0 <= reset_frequency(path) <= 1.0

    def test_replications_share_streams(self, small_economy, trajectory):
        paths = sticky_replications(small_economy, trajectory, HazardSpec(), seed=9, replications=3)
        assert len(paths) == 3
        first = sticky_prices(small_economy, trajectory, HazardSpec(), seed=9, replication=0)
        np.testing.assert_array_equal(paths[0].prices, first.prices)
        assert not np.array_equal(paths[0].reset_flags, paths[1].reset_flags)

    def test_replications_must_be_positive(self, small_economy, trajectory):
        with pytest.raises(PricingError):
            sticky_replications(small_economy, trajectory, HazardSpec(), seed=9, replications=0)


class TestVintageWeights:
    """Test vintage distributions."""

    def test_flexible_vintage_is_current(self, small_economy, trajectory):
        weights = vintage_weights(flexible_prices(small_economy, trajectory), firm=0, T=20)
        assert weights[20] == 1.0
        assert weights.sum() == 1.0

    def test_sticky_weights_on_simplex(self, small_economy, trajectory):
        paths = sticky_replications(small_economy, trajectory, HazardSpec(), seed=4, replications=4)
        weights = vintage_weights(paths, firm=1, T=30)
        assert weights.sum() == pytest.approx(1.0)
        assert (weights >= 0).all()

    def test_horizon_outside_path(self, small_economy, trajectory):
        path = sticky_prices(small_economy, trajectory, HazardSpec(), seed=1)
        with pytest.raises(PricingError):
            vintage_weights(path, firm=0, T=path.horizon + 1)

    def test_geometric_law(self):
        weights = geometric_vintage_weights(0.3, 12)
        assert weights.sum() == pytest.approx(1.0)
        assert weights[12] == pytest.approx(0.3)
        assert weights[0] == pytest.approx(0.7 ** 12)

    def test_constant_hazard_matches_geometric_law(self, small_economy, trajectory):
        eta, T = 0.3, 12
        spec = HazardSpec(g_scale=1e-6, c0=eta, c1=eta, allow_degenerate=True)
        counts = np.zeros(T + 1)
        for replication in range(420):
            path = sticky_prices(small_economy, trajectory, spec, seed=21, replication=replication)
            counts += np.bincount(T - path.ages[T], minlength=T + 1)
        assert counts.sum() > 1e5
        np.testing.assert_allclose(counts / counts.sum(), geometric_vintage_weights(eta, T), atol=6e-3)
