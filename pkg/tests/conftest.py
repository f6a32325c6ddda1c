"""
Pytest configuration and shared fixtures for the netflation test suite.
"""
import numpy as np
import pytest

from netflation.config.run_config import load_config
from netflation.network.netgen import Economy, NetworkParams, build_economy, calibrated_params

SMALL_NETWORK = dict(n=240, alpha=2.5, d_min=2, d_max=30, nu=0.5, seed=7)

# --set overrides that keep a full CLI run to a few seconds
SMALL_OVERRIDES = (
    "network.n=160",
    "network.d_max=20",
    "monetary.horizon=40",
    "ensemble.replications=3",
    "hazard.replications=2",
)


@pytest.fixture(scope="session")
def small_params():
    """Calibrated parameters of a small two-sector economy."""
    return calibrated_params(NetworkParams(**SMALL_NETWORK))


@pytest.fixture(scope="session")
def small_economy(small_params):
    """A generated economy small enough for dense oracles."""
    return build_economy(small_params)


@pytest.fixture
def block_economy():
    """Four firms in two sectors with a known spectrum {1, 0.8, 0, 0}.

    A = 0.8 * blockdiag(J2 / 2, J2 / 2) + 0.2 * J4 / 4, doubly stochastic.
    """
    within = np.kron(np.eye(2), np.full((2, 2), 0.5))
    A = 0.8 * within + 0.2 * np.full((4, 4), 0.25)
    return Economy.from_adjacency(A)


@pytest.fixture
def small_overrides():
    return list(SMALL_OVERRIDES)


@pytest.fixture
def small_config(tmp_path, small_overrides):
    """Resolved run configuration writing into a temporary directory."""
    return load_config(overrides=small_overrides, out=str(tmp_path / "out"))


@pytest.fixture(autouse=True)
def set_random_seed():
    """Set random seed for reproducible tests."""
    np.random.seed(42)


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )


def pytest_collection_modifyitems(config, items):
    """Automatically mark tests based on their location and content."""
    for item in items:
        # Mark integration tests
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)

        # Mark slow tests
        if "slow" in item.name.lower() or "ensemble_scale" in item.name.lower():
            item.add_marker(pytest.mark.slow)


# Custom pytest options
def pytest_addoption(parser):
    parser.addoption(
        "--run-integration",
        action="store_true",
        default=False,
        help="run integration tests"
    )
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run slow tests"
    )


def pytest_runtest_setup(item):
    """Setup for each test."""
    # Skip integration tests unless explicitly requested
    if item.get_closest_marker("integration"):
        if not item.config.getoption("--run-integration"):
            pytest.skip("Integration test skipped. Use --run-integration to run.")

    # Skip slow tests unless explicitly requested
    if item.get_closest_marker("slow"):
        if not item.config.getoption("--run-slow"):
            pytest.skip("Slow test skipped. Use --run-slow to run.")
