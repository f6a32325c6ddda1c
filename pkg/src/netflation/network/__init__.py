from netflation.network.netgen import (
    DegreeSequence,
    Economy,
    GenerationError,
    NetworkParams,
    ParameterError,
    TruncatedPareto,
    build_economy,
    calibrated_params,
    degree_moment,
    knn_profile,
    knn_slope,
    sample_degrees,
)
from netflation.network.spectral import (
    AssumptionViolationError,
    NumericalError,
    ProxyVectors,
    SpectralSummary,
    TwoModeShock,
    dense_spectrum,
    proxy_vectors,
    stationary_vector,
    subdominant_pair,
    two_mode_shock,
)

__all__ = [
    "DegreeSequence",
    "Economy",
    "GenerationError",
    "NetworkParams",
    "ParameterError",
    "TruncatedPareto",
    "build_economy",
    "calibrated_params",
    "degree_moment",
    "knn_profile",
    "knn_slope",
    "sample_degrees",
    "AssumptionViolationError",
    "NumericalError",
    "ProxyVectors",
    "SpectralSummary",
    "TwoModeShock",
    "dense_spectrum",
    "proxy_vectors",
    "stationary_vector",
    "subdominant_pair",
    "two_mode_shock",
]
