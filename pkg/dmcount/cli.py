"""
Command-line front end: ``python -m dmcount <command> ...``.

Exit codes: 0 success, 1 bad input, 2 no method within the caps, 3 verification mismatch.
"""
import logging
import sys
from functools import wraps

import click

from .config import configure_logging, load_engine_config, log_level_from_env
from .services import reports
from .utils.errors import DmError, MethodUnavailable, OracleScaleExceeded
from .utils.responses import render

METHODS = ["auto", "formula", "oracle"]


def exit_code_for(error: DmError) -> int:
    if isinstance(error, (MethodUnavailable, OracleScaleExceeded)):
        return reports.EXIT_UNAVAILABLE
    return reports.EXIT_USAGE


def report_command(f):
    """
    Run a command that returns a Report: print it, exit with its code, and
    turn domain errors into ``error: <message>`` on stderr.
    """

    @wraps(f)
    @click.pass_context
    def decorated_function(ctx, *args, **kwargs):
        options = ctx.obj
        try:
            config = load_engine_config(options["oracle_cap"])
            report = f(config, *args, **kwargs)
        except DmError as e:
            logging.info(f"{ctx.command.name} failed: {e!r}")
            click.echo(f"error: {e}", err=True)
            ctx.exit(exit_code_for(e))
        click.echo(render(report, as_json=options["json"]))
        ctx.exit(report.exit_code)

    return decorated_function


class DmGroup(click.Group):
    """Command group whose own usage errors exit 1, so that 2 only ever means "no method"."""

    def main(self, args=None, prog_name=None, standalone_mode=True, **extra):
        try:
            code = super().main(args, prog_name, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            code = reports.EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = reports.EXIT_USAGE
        if not standalone_mode:
            return code
        sys.exit(code if isinstance(code, int) else reports.EXIT_OK)


@click.group(cls=DmGroup)
@click.option("--json", "as_json", is_flag=True, help="Print the machine-readable payload.")
@click.option("--oracle-cap", type=click.IntRange(min=1), default=None,
              help="Largest group order the brute-force oracle may build (env DM_ORACLE_CAP).")
@click.option("-v", "--verbose", is_flag=True, help="Log method choices and timings to stderr (overrides DM_LOG_LEVEL).")
@click.pass_context
def cli(ctx, as_json, oracle_cap, verbose):
    """Count diamond (M5) sublattices in subgroup lattices of finite abelian groups."""
    level = "INFO" if verbose else log_level_from_env("WARNING")
    configure_logging(level, stream=sys.stderr, force=True)
    ctx.obj = {"json": as_json, "oracle_cap": oracle_cap}


@cli.command()
@click.argument("spec")
@click.option("--method", type=click.Choice(METHODS), default="auto", show_default=True)
@click.option("--list", "list_diamonds", is_flag=True, help="Also list every diamond (order <= 64).")
@report_command
def dm(config, spec, method, list_diamonds):
    """dm(G) for a group such as Z4xZ8 or "Z2^2 x Z3^2"."""
    return reports.cmd_dm(spec, config, method, list_diamonds)


@cli.command()
@click.argument("spec")
@report_command
def verify(config, spec):
    """Compare every applicable formula with the oracle."""
    return reports.cmd_verify(spec, config)


@cli.command()
@click.argument("spec")
@report_command
def sections(config, spec):
    """Section census n_S(G) and the diamonds contributed by each S x S."""
    return reports.cmd_sections(spec, config)


@cli.command()
@click.argument("spec")
@click.option("--brute-force", is_flag=True, help="Also count automorphisms directly (small groups).")
@report_command
def aut(config, spec, brute_force):
    """|Aut(G)|."""
    return reports.cmd_aut(spec, config, brute_force)


@cli.command()
@click.argument("spec")
@click.option("--by-type", is_flag=True, help="Count subgroups per isomorphism type.")
@click.option("--dump", is_flag=True, help="Print every subgroup: order, members, type.")
@report_command
def subgroups(config, spec, by_type, dump):
    """|L(G)|, with a per-order breakdown for small lattices or when the oracle ran."""
    return reports.cmd_subgroups(spec, config, by_type, dump)


@cli.command()
@click.option("--prime", "-p", type=int, required=True)
@click.option("--exponent", "-n", type=click.IntRange(min=1), required=True)
@click.option("--sort", type=click.Choice(["lex", "dm"]), default="lex", show_default=True)
@report_command
def survey(config, prime, exponent, sort):
    """dm for every abelian group of order p^n."""
    return reports.cmd_survey(prime, exponent, config, sort)


def main():
    cli(prog_name="dmcount")
