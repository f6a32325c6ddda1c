"""
Tests for production-network generation.
"""
import numpy as np
import pytest
from scipy import integrate, stats

from netflation.network.netgen import (
    Economy,
    GenerationError,
    NetworkParams,
    ParameterError,
    TruncatedPareto,
    build_economy,
    calibrate_tilt,
    calibrated_params,
    knn_slope,
    sample_degrees,
)


class TestTruncatedPareto:
    """Test the continuous degree law."""

    @pytest.mark.parametrize("s", [-0.5, 0.25, 1.0, 1.5, 2.0])
    def test_moments_match_quadrature(self, s):
        law = TruncatedPareto(2.5, 2.0, 50.0)
        expected, _ = integrate.quad(lambda d: d ** s * law.pdf(d), 2.0, 50.0)
        assert law.moment(s) == pytest.approx(expected, rel=1e-8)

    def test_log_branch(self):
        """s = alpha - 1 integrates as a logarithm."""
        law = TruncatedPareto(2.5, 2.0, 50.0)
        expected, _ = integrate.quad(lambda d: d ** 1.5 * law.pdf(d), 2.0, 50.0)
        assert law.moment(1.5) == pytest.approx(expected, rel=1e-8)

    def test_zeroth_moment_is_one(self):
        assert TruncatedPareto(3.0, 1.0, 10.0).moment(0) == 1.0

    def test_point_mass(self):
        law = TruncatedPareto(2.5, 5.0, 5.0)
        assert law.moment(2.0) == pytest.approx(25.0)
        assert np.all(law.ppf(np.array([0.1, 0.9])) == 5.0)
        assert law.variance() == pytest.approx(0.0, abs=1e-12)

    def test_ppf_inverts_cdf(self):
        law = TruncatedPareto(2.5, 2.0, 50.0)
        u = np.linspace(0.01, 0.99, 25)
        np.testing.assert_allclose(law.cdf(law.ppf(u)), u, atol=1e-12)

    def test_invalid_alpha(self):
        with pytest.raises(ParameterError):
            TruncatedPareto(1.0, 2.0, 50.0)


class TestNetworkParams:
    """Test parameter validation."""

    def test_valid(self):
        params = NetworkParams(n=100, alpha=2.5, d_min=2, d_max=30, nu=0.5)
        assert params.sector_affinity == 0.9
        assert params.to_dict()["n"] == 100

    @pytest.mark.parametrize(
        "changes",
        [
            {"alpha": 1.0},
            {"d_min": 0},
            {"d_min": 40},
            {"nu": 0.0},
            {"nu": 1.0},
            {"sector_affinity": 1.0},
            {"sectors": 0},
        ],
    )
    def test_invalid(self, changes):
        base = dict(n=100, alpha=2.5, d_min=2, d_max=30, nu=0.5)
        base.update(changes)
        with pytest.raises(ParameterError):
            NetworkParams(**base)

    def test_d_max_must_be_below_n(self):
        with pytest.raises(ParameterError, match="d_max"):
            build_economy(NetworkParams(n=20, alpha=2.5, d_min=2, d_max=20, nu=0.5, nu_w=0.0))


class TestDegreeSampling:
    """Test degree draws."""

    def test_same_seed_same_degrees(self):
        params = NetworkParams(n=500, alpha=2.5, d_min=2, d_max=40, nu=0.5, seed=3)
        np.testing.assert_array_equal(sample_degrees(params).degrees, sample_degrees(params).degrees)

    def test_support(self):
        params = NetworkParams(n=2000, alpha=2.0, d_min=3, d_max=25, nu=0.5, seed=1)
        degrees = sample_degrees(params).degrees
        assert degrees.min() >= 3
        assert degrees.max() <= 25
        assert degrees.dtype == np.int64

    def test_continuous_draws_fit_the_law(self):
        law = TruncatedPareto(2.5, 2.0, 100.0)
        n = 10_000
        distances = [stats.kstest(law.rvs(n, np.random.default_rng(s)), law.cdf).statistic for s in range(20)]
        assert np.mean(distances) < 1.628 / np.sqrt(n)

    def test_rounded_degrees_fit_the_law(self):
        n = 10_000
        distances = []
        for seed in range(20):
            params = NetworkParams(n=n, alpha=2.5, d_min=2, d_max=100, nu=0.5, seed=seed)
            degrees = sample_degrees(params).degrees
            k = np.arange(2, 100)
            empirical = np.searchsorted(np.sort(degrees), k, side="right") / n
            # nearest-integer rounding: P(d <= k) = F(k + 1/2)
            distances.append(np.abs(empirical - TruncatedPareto(2.5, 2.0, 100.0).cdf(k + 0.5)).max())
        assert np.mean(distances) < 1.628 / np.sqrt(n)

    def test_sample_mean_matches_moment(self):
        law = TruncatedPareto(2.5, 2.0, 100.0)
        n = 100_000
        draws = law.rvs(n, np.random.default_rng(4))
        assert abs(draws.mean() - law.mean()) < 3.0 * np.sqrt(law.variance() / n)

    def test_rounded_mean_matches_discretized_moment(self):
        law = TruncatedPareto(2.5, 2.0, 100.0)
        n = 100_000
        k = np.arange(2, 101)
        mass = law.cdf(k + 0.5) - law.cdf(k - 0.5)
        mean = k @ mass
        sd = np.sqrt((k - mean) ** 2 @ mass)
        degrees = sample_degrees(NetworkParams(n=n, alpha=2.5, d_min=2, d_max=100, nu=0.5, seed=4)).degrees
        assert abs(degrees.mean() - mean) < 3.0 * sd / np.sqrt(n)


class TestBuildEconomy:
    """Test the generated economy."""

    def test_column_stochastic(self, small_economy):
        np.testing.assert_allclose(small_economy.column_sums(), 1.0, atol=1e-12)

    def test_supplier_counts(self, small_economy):
        counts = np.diff(small_economy.adjacency.indptr)
        # repair edges may add at most one supplier per round
        extra = counts - small_economy.degrees.degrees
        assert extra.min() >= 0
        assert extra.max() <= small_economy.repair_rounds

    def test_stationary_vector(self, small_economy):
        v1 = small_economy.stationary
        assert v1.min() > 0
        assert v1.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(small_economy.propagate(v1), v1, atol=1e-9)

    def test_quantities(self, small_economy):
        np.testing.assert_allclose(small_economy.quantities, small_economy.degrees.degrees.astype(float) ** 2)

    def test_disassortative(self, small_economy):
        slope, _ = knn_slope(small_economy)
        assert slope < 0

    def test_deterministic(self, small_params):
        a = build_economy(small_params)
        b = build_economy(small_params)
        assert (a.adjacency != b.adjacency).nnz == 0
        np.testing.assert_array_equal(a.stationary, b.stationary)

    @pytest.mark.slow
    def test_knn_slope_matches_nu(self):
        params = calibrated_params(NetworkParams(n=5000, alpha=2.5, d_min=2, d_max=60, nu=0.5, seed=0))
        slopes = [knn_slope(build_economy(params.with_updates(seed=seed)))[0] for seed in range(3)]
        assert np.mean(slopes) == pytest.approx(-0.5, abs=0.15)


class TestFromAdjacency:
    """Test wrapping hand-made matrices."""

    def test_block_toy(self, block_economy):
        assert block_economy.n == 4
        np.testing.assert_allclose(block_economy.stationary, 0.25, atol=1e-10)
        assert np.all(block_economy.degrees.degrees == 4)

    def test_not_column_stochastic(self):
        with pytest.raises(GenerationError, match="column-stochastic"):
            Economy.from_adjacency(np.array([[0.5, 0.5], [0.4, 0.5]]))

    def test_negative_entries(self):
        with pytest.raises(GenerationError, match="nonnegative"):
            Economy.from_adjacency(np.array([[1.5, 0.5], [-0.5, 0.5]]))

    def test_reducible(self):
        with pytest.raises(GenerationError, match="strongly connected"):
            Economy.from_adjacency(np.eye(3))

    def test_regular_degrees_disable_tilt(self, block_economy):
        params = NetworkParams(n=4, alpha=2.5, d_min=2, d_max=2, nu=0.5)
        degrees = np.full(4, 2, dtype=np.int64)
        assert calibrate_tilt(degrees, np.zeros(4, dtype=np.int64), params) == 0.0
        assert all(np.isnan(knn_slope(block_economy)))
