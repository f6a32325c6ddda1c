from netflation.experiments.registry import (
    ALIASES,
    EXPERIMENTS,
    Check,
    Experiment,
    ExperimentError,
    ExperimentResult,
    get_experiment,
    resolve_name,
    run_experiment,
)

__all__ = [
    "ALIASES",
    "EXPERIMENTS",
    "Check",
    "Experiment",
    "ExperimentError",
    "ExperimentResult",
    "get_experiment",
    "resolve_name",
    "run_experiment",
]
