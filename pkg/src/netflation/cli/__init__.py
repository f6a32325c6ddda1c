from typing import Optional, Tuple

import click

from netflation import __version__
from netflation.cli.ensemble import experiment, report, sweep
from netflation.cli.run import generate, simulate
from netflation.cli.template import get_yaml


class NetflationGroup(click.Group):
    """Click group whose usage errors exit with code 1, like configuration errors."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = 1
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


@click.group(cls=NetflationGroup, invoke_without_command=True)
@click.version_option(version=__version__)
@click.help_option(
    "--help",
    "-h"
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=False, dir_okay=False),
    default=None,
    help="YAML run configuration"
)
@click.option(
    "--seed",
    type=click.IntRange(min=0, max=2 ** 64 - 1),
    default=None,
    help="Base seed (overrides the config)"
)
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Output directory (overrides output.dir)"
)
@click.option(
    "--jobs",
    type=int,
    default=None,
    help="Worker processes; -1 uses all available CPUs"
)
@click.option(
    "--set",
    "overrides",
    multiple=True,
    metavar="SECTION.KEY=VALUE",
    help="Override one configuration key; repeatable"
)
@click.pass_context
def cli(
    ctx,
    config_path: Optional[str],
    seed: Optional[int],
    out: Optional[str],
    jobs: Optional[int],
    overrides: Tuple[str, ...],
):
    """Monetary injections on production networks and the price distortions they leave"""
    ctx.obj = {
        "config": config_path,
        "seed": seed,
        "out": out,
        "jobs": jobs,
        "overrides": overrides,
    }
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())
        ctx.exit(0)


# Attach subcommands
cli.add_command(generate)
cli.add_command(simulate)
cli.add_command(experiment)
cli.add_command(sweep)
cli.add_command(report)
cli.add_command(get_yaml)
