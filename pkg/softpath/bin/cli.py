#!/usr/bin/env python

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Tuple

import click

from ..script_utils import run_script

###############################################################################

LOG_FORMAT = "%(levelname)s | %(name)s | %(message)s"

###############################################################################


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug detail.")
def main(verbose: bool) -> None:
    """Edit soft paths with scripts and export them to SVG."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "-o",
    "--out",
    "out_dir",
    default=".",
    show_default=True,
    type=click.Path(file_okay=False),
    help="Directory for SVG output.",
)
def run(script: str, out_dir: str) -> None:
    """Run a script file, one command per line."""
    text = Path(script).read_text(encoding="utf-8")
    sys.exit(run_script(text, out_dir))


@main.command(name="eval")
@click.argument("commands", nargs=-1, required=True)
@click.option(
    "-o",
    "--out",
    "out_dir",
    default=".",
    show_default=True,
    type=click.Path(file_okay=False),
    help="Directory for SVG output.",
)
def evaluate(commands: Tuple[str, ...], out_dir: str) -> None:
    """
    Run commands given as arguments, one per argument.

    For example: softpath eval 'load a "M 0 0 L 1 0"' 'show a'
    """
    script = "\n".join(commands)
    sys.exit(run_script(script, out_dir))


if __name__ == "__main__":
    main()
