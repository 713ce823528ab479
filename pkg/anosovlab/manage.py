"""A command-line tool for exact experiments on suspension Anosov flows."""

import json
import sys
from functools import wraps
from typing import Tuple

import click

from anosovlab import reports, schema, settings, utils
from anosovlab.errors import AnosovLabError, InvalidInputError


def handle_errors(func):
    """Print library errors in red on stderr and exit with status 2."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AnosovLabError as exc:
            click.secho(f"error: {exc}", fg="red", err=True)
            sys.exit(2)

    return wrapper


def run_options(func):
    """Options shared by every computing command; unset options fall back to the config layers."""
    options = [
        click.option("--matrix", "-m", required=True, type=str, help='The matrix A, written "a,b;c,d".'),
        click.option("--max-period", "-P", type=int, help="Largest least period of the orbits considered."),
        click.option("--max-slope", "-M", type=int, help="Largest absolute surgery slope."),
        click.option("--brute-height", "-H", type=int, help="Entry bound of the brute-force conjugator search."),
        click.option("--m0", type=int, help="Slopes with |m| below m0 are labeled hypothetical."),
        click.option(
            "--format",
            "fmt",
            type=click.Choice(settings.OUTPUT_FORMATS),
            help="Output format; dot is available for surgery and loop-candidates.",
        ),
        click.option("--threads", type=int, help=f"Worker threads; overrides {settings.THREADS_ENV}."),
        click.option("--c0", type=str, help="Constant of the free-homotopy bound, a rational."),
        click.option("--t0", type=int, help="The bound is asserted for t > t0 only."),
        click.option("--kappa3", type=str, help="Period comparison constant, a rational."),
        click.option("--tau", type=str, help="Duration of one fiber crossing, a rational."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_config(subcommand: str, matrix: str, fmt, **options) -> utils.RunConfig:
    return utils.build_run_config(matrix, subcommand, format=fmt, **options)


def emit(report: dict, kind: str, fmt: str):
    text = reports.render(report, kind, fmt)
    click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.version_option(settings.VERSION, prog_name=settings.TOOL_NAME)
def cli():
    """
    Exact experiments on suspension Anosov flows of hyperbolic toral automorphisms.
    """
    pass


@cli.command()
@click.option(
    "--set",
    "write",
    is_flag=True,
    help="Store the --items values as defaults for the run options.",
)
@click.option(
    "--show",
    is_flag=True,
    help="Print the stored defaults as JSON; this is what a bare `config` does.",
)
@click.option(
    "--items",
    "-i",
    multiple=True,
    type=str,
    help="A default written key=value, e.g. max_period=5 or tau=1/2. Repeat for several keys.",
)
@click.option(
    "--unset",
    multiple=True,
    type=str,
    help="Drop a stored default so the built-in value applies again. Repeatable.",
)
@handle_errors
def config(write: bool, show: bool, items: Tuple[str], unset: Tuple[str]):
    """
    Shows or changes the stored defaults of the run options.

    Keys are the long option names with underscores: max_period, max_slope,
    brute_height, m0, format, threads, c0, t0, kappa3, tau. Values are
    checked the way the options check them. ANOSOV_LAB_THREADS and explicit
    options still win over stored values.

    Examples:
        - anosovlab config --set -i max_period=5 -i format=tsv

        - anosovlab config --unset format --show
    """
    if items and not write:
        raise InvalidInputError("--items only takes effect together with --set")
    if write and not items:
        raise InvalidInputError("--set needs at least one --items key=value")

    stored = utils.get_user_config()
    stored.update(utils.parse_config_items(items))
    for key in unset:
        key = key.strip().replace("-", "_")
        if key not in settings.DEFAULTS:
            raise InvalidInputError(f"unknown configuration key '{key}'")
        stored.pop(key, None)

    changed = write or bool(unset)
    if changed:
        utils.save_user_config(stored)
        if not show:
            click.secho("Configuration updated successfully.", fg="green")
    if show or not changed:
        click.secho(json.dumps(stored, indent=2), fg="green")


@cli.command()
@run_options
@click.option("--counts-only", is_flag=True, help="Print the census table without the orbit list.")
@handle_errors
def orbits(matrix: str, fmt, counts_only: bool, **options):
    """
    Counts and lists the periodic orbits of A up to the period bound.

    Examples:
        - anosovlab orbits --matrix "2,1;1,1" --max-period 3
    """
    run = resolve_config("orbits", matrix, fmt, **options)
    emit(reports.cmd_orbits(run, counts_only=counts_only), "orbits", run.format)


@cli.command()
@run_options
@handle_errors
def reversible(matrix: str, fmt, **options):
    """
    Decides whether A is conjugate to its inverse in GL(2,Z).

    The word decision is checked against a brute-force search up to the
    brute-force height, and the reversed flow is reported with its orbit
    correspondence.

    Examples:
        - anosovlab reversible --matrix "2,1;1,1" -H 2
    """
    run = resolve_config("reversible", matrix, fmt, **options)
    emit(reports.cmd_reversible(run), "reversible", run.format)


@cli.command()
@run_options
@click.option(
    "--move",
    "moves",
    multiple=True,
    type=str,
    help='A surgery move "(pK-iJ, m)". Multiple moves can be specified by using --move multiple times.',
)
@click.option("--seed", type=int, default=0, show_default=True, help="First seed of the arc system.")
@handle_errors
def surgery(matrix: str, fmt, moves: Tuple[str], seed: int, **options):
    """
    Computes the first homology after integral surgeries on orbits.

    Examples:
        - anosovlab surgery --matrix "2,1;1,1" --move "(p1-i0, 3)"

        - anosovlab surgery --matrix "2,1;1,1" --move "(p1-i0, 2)" --move "(p2-i0, -2)"
    """
    run = resolve_config("surgery", matrix, fmt, **options)
    emit(reports.cmd_surgery(run, moves, seed=seed), "surgery", run.format)


@cli.command("loop-candidates")
@run_options
@handle_errors
def loop_candidates(matrix: str, fmt, **options):
    """
    Lists length-two surgery loops passing the necessary conditions.

    Examples:
        - anosovlab loop-candidates --matrix "2,1;1,1" -P 4 -M 3 --format dot
    """
    run = resolve_config("loop-candidates", matrix, fmt, **options)
    report = reports.cmd_loop_candidates(run)
    if not report["reversible"]:
        click.secho(f"warning: {reports.UNDECIDED_TARGET_NOTE}", fg="yellow", err=True)
    emit(report, "loops", run.format)


@cli.command()
@run_options
@handle_errors
def propb(matrix: str, fmt, **options):
    """
    Tabulates the density bound for surgery loops and the orbit growth rate.

    Examples:
        - anosovlab propb --matrix "2,1;1,1" -P 25
    """
    run = resolve_config("propb", matrix, fmt, **options)
    emit(reports.cmd_propb(run), "propb", run.format)


@cli.command("schema")
@click.argument("kind", type=click.Choice(schema.REPORT_KINDS))
@handle_errors
def show_schema(kind: str):
    """
    Prints the JSON schema of a report with every reference resolved.

    Examples:
        - anosovlab schema surgery
    """
    click.echo(json.dumps(schema.recursive_resolve(kind), indent=2, ensure_ascii=False))


if __name__ == "__main__":
    cli()
