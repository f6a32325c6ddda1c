from netflation.ensemble.concentration import (
    BinComparison,
    ConcentrationDiagnostics,
    EnsembleError,
    VarianceScaling,
    compare_lambda2_bins,
    concentration_check,
    quantile_correlation,
    variance_scaling,
)
from netflation.ensemble.pipeline import MonetarySettings, ReplicationResult, ReplicationTask, run_replication
from netflation.ensemble.runner import (
    EXPECTED_SIGNS,
    SWEEP_PARAMETERS,
    EnsembleReport,
    EnsembleSpec,
    paired_sweep,
    run,
    variance_scaling_study,
)

__all__ = [
    "BinComparison",
    "ConcentrationDiagnostics",
    "EnsembleError",
    "VarianceScaling",
    "compare_lambda2_bins",
    "concentration_check",
    "quantile_correlation",
    "variance_scaling",
    "MonetarySettings",
    "ReplicationResult",
    "ReplicationTask",
    "run_replication",
    "EXPECTED_SIGNS",
    "SWEEP_PARAMETERS",
    "EnsembleReport",
    "EnsembleSpec",
    "paired_sweep",
    "run",
    "variance_scaling_study",
]
