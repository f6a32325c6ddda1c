from pathlib import Path
from typing import Optional

import click

from netflation.config.run_config import config_template
from netflation.utils import create_dirs

TEMPLATE_NAME = "netflation.yaml"


@click.command("get-yaml")
@click.help_option(
    "--help",
    "-h"
)
@click.argument(
    "output",
    required=False,
    type=click.Path(dir_okay=True, writable=True, resolve_path=True)
)
@click.option(
    "--force",
    is_flag=True,
    default=False,
    help="Overwrite if file exists"
)
def get_yaml(output: Optional[str], force: bool):
    """Generate a run configuration YAML template.

    If OUTPUT is omitted, the file is saved as ./netflation.yaml in the current directory.
    If OUTPUT is a directory, the file will be saved as netflation.yaml inside it.
    """
    if output is None:
        output_path = Path.cwd() / TEMPLATE_NAME
    else:
        output_path = Path(output)
        if output_path.is_dir():
            output_path = output_path / TEMPLATE_NAME

    create_dirs(output_path)

    # Prevent accidental overwrite unless forced
    if output_path.exists() and not force:
        raise click.ClickException(
            f"File already exists: {output_path}. Use --force to overwrite."
        )

    if output_path.exists() and force:
        output_path.unlink()

    output_path.write_text(config_template(), encoding="utf-8")
    click.echo(f"Template written to: {output_path}")
