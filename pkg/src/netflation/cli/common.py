from contextlib import contextmanager

import click

from netflation.analysis.stats import StatisticDomainError
from netflation.analysis.theory import TheoryDomainError
from netflation.config.run_config import ConfigError, RunConfig, load_config
from netflation.data.snapshot import SnapshotError
from netflation.data.writer import OutputWriter
from netflation.dynamics.monetary import MonetaryDomainError
from netflation.dynamics.pricing import PricingError
from netflation.ensemble.concentration import EnsembleError
from netflation.experiments.registry import ExperimentError
from netflation.network.netgen import GenerationError, ParameterError
from netflation.network.spectral import NumericalError
from netflation.utils import attach_file_handler, log_stage, logger

USAGE_ERRORS = (
    ConfigError,
    ParameterError,
    MonetaryDomainError,
    PricingError,
    StatisticDomainError,
    TheoryDomainError,
    SnapshotError,
    ExperimentError,
)
PIPELINE_ERRORS = (GenerationError, NumericalError, EnsembleError)


class PipelineFailure(click.ClickException):
    """Generation, numerical or ensemble failure; exits with code 2."""

    exit_code = 2


def resolve_config(ctx: click.Context) -> RunConfig:
    """defaults < --config file < --set overrides < --seed/--out/--jobs."""
    options = ctx.find_root().obj or {}
    try:
        return load_config(
            path=options.get("config"),
            overrides=options.get("overrides", ()),
            seed=options.get("seed"),
            out=options.get("out"),
            jobs=options.get("jobs"),
        )
    except ConfigError as e:
        raise click.ClickException(f"Invalid configuration: {e}")


def open_writer(config: RunConfig) -> OutputWriter:
    writer = OutputWriter(config.output.dir, config)
    log_file = attach_file_handler(config.output.dir)
    logger.info(f"Logging to {log_file} (seed {config.seed})")
    return writer


@contextmanager
def stage(name: str):
    """Log a stage separator and map failures inside it onto the exit-code contract."""
    log_stage(name)
    try:
        yield
    except PIPELINE_ERRORS as e:
        raise PipelineFailure(f"{name} failed: {e}")
    except USAGE_ERRORS as e:
        raise click.ClickException(f"{name} failed: {e}")
