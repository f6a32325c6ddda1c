from typing import Optional

import click
import pandas as pd

from netflation.cli.common import open_writer, resolve_config, stage
from netflation.ensemble.concentration import MIN_DRAWS, concentration_check
from netflation.ensemble.runner import SWEEP_PARAMETERS, EnsembleSpec, paired_sweep, run, variance_scaling_study
from netflation.experiments.registry import EXPERIMENTS, ExperimentError, resolve_name, run_experiment

REPORT_STATISTICS = ("phi_T", "omega_bar", "psi_bar")


@click.command("experiment")
@click.help_option(
    "--help",
    "-h"
)
@click.argument("name", required=False)
@click.option(
    "--list",
    "list_only",
    is_flag=True,
    default=False,
    help="List the registered experiments and exit"
)
@click.pass_context
def experiment(ctx, name: Optional[str], list_only: bool):
    """Run a named experiment and record PASS/FAIL with its data."""
    if list_only or name is None:
        for key, entry in EXPERIMENTS.items():
            click.echo(f"{key:<16} {entry.alias:<24} {entry.description}")
        if name is None and not list_only:
            raise click.ClickException(f"Missing experiment name; valid names: {', '.join(EXPERIMENTS)}")
        return
    try:
        name = resolve_name(name)
    except ExperimentError as e:
        raise click.ClickException(str(e))

    config = resolve_config(ctx)
    writer = open_writer(config)
    with stage(name):
        result = run_experiment(name, config, writer)
    with stage("export"):
        writer.finalize({"experiment": name, "status": result.status})
    click.echo(f"{name}: {result.status}")


@click.command("sweep")
@click.help_option(
    "--help",
    "-h"
)
@click.option(
    "--parameter",
    type=click.Choice(SWEEP_PARAMETERS),
    default=None,
    help="Parameter to sweep (default: ensemble.sweep_parameter)"
)
@click.option(
    "--values",
    type=str,
    default=None,
    help="Comma-separated values (default: ensemble.sweep_values)"
)
@click.option(
    "--statistic",
    type=str,
    default=None,
    help="Replication statistic to difference (default: ensemble.statistic)"
)
@click.pass_context
def sweep(ctx, parameter: Optional[str], values: Optional[str], statistic: Optional[str]):
    """Paired sweep of one parameter under common random numbers."""
    config = resolve_config(ctx)
    parameter = parameter or config.ensemble.sweep_parameter
    if parameter is None:
        raise click.ClickException("No sweep parameter given; use --parameter or ensemble.sweep_parameter")
    if parameter not in SWEEP_PARAMETERS:
        raise click.ClickException(f"Unknown sweep parameter {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")
    if values is not None:
        try:
            grid = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise click.ClickException(f"--values must be comma-separated numbers, got {values!r}")
    else:
        grid = [float(v) for v in config.ensemble.sweep_values]
    if len(grid) < 2:
        raise click.ClickException("a sweep needs at least two values")
    statistic = statistic or config.ensemble.statistic

    writer = open_writer(config)
    with stage("ensemble"):
        spec = EnsembleSpec.from_config(config, progress=True)
        rows = paired_sweep(spec, parameter, grid, statistic=statistic)
    with stage("export"):
        table = pd.DataFrame(rows)
        writer.csv("sweep.csv", table)
        writer.json("sweep.json", {"parameter": parameter, "values": grid, "statistic": statistic, "rows": rows})
        writer.finalize({"parameter": parameter})
    for row in rows:
        click.echo(
            f"{parameter} {row['value_low']:g} -> {row['value_high']:g}: "
            f"mean difference {row['mean_difference']:.4e}, sign agreement {row['agreement']:.2f}"
        )


@click.command("report")
@click.help_option(
    "--help",
    "-h"
)
@click.option(
    "--variance-scaling",
    is_flag=True,
    default=False,
    help="Also fit the variance of phi_T against ensemble.sizes"
)
@click.pass_context
def report(ctx, variance_scaling: bool):
    """Run the configured ensemble and write its report."""
    config = resolve_config(ctx)
    writer = open_writer(config)
    with stage("ensemble"):
        spec = EnsembleSpec.from_config(config, progress=True)
        ensemble = run(spec)
        if variance_scaling:
            ensemble.variance_scaling, _ = variance_scaling_study(spec, config.ensemble.sizes)

    payload = ensemble.to_dict()
    concentration = {}
    for name in REPORT_STATISTICS:
        draws = ensemble.values(name)
        if draws.size >= MIN_DRAWS:
            concentration[name] = concentration_check(draws).to_dict()
    payload["concentration"] = concentration

    with stage("export"):
        if config.output.csv:
            writer.csv("replications.csv", ensemble.scalar_frame())
        if config.output.hdf5:
            writer.store("series.h5", ensemble.series_groups(), attrs={"base_seed": str(config.seed)})
        writer.json("ensemble_report.json", payload)
        writer.finalize({"included": len(ensemble.included), "excluded": ensemble.excluded})
    click.echo(
        f"Ensemble report written to: {writer.out_dir} "
        f"({len(ensemble.included)} included, {ensemble.excluded} excluded)"
    )
