"""Command-line front end: sweeps, figure data, self-verification and the HTTP server."""

import logging
import sys
from pathlib import Path
from typing import Any

import click

from isospectral.config import SweepConfig, logging_config, settings
from isospectral.errors import ConfigError, DomainError, IsospectralError
from isospectral.models import FigureTag, OutputFormat

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NON_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3


class IsospectralGroup(click.Group):
    """Click group mapping failures onto the documented exit codes.

    Usage errors exit with 1 (click itself would use 2), numerical failures with 2.
    """

    def main(
        self,
        args: Any = None,
        prog_name: str | None = None,
        complete_var: str | None = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> Any:
        try:
            code = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as exc:
            exc.show()
            code = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_USAGE
        except (DomainError, ConfigError) as exc:
            click.echo(f"Error: {exc}", err=True)
            code = EXIT_USAGE
        except IsospectralError as exc:
            click.echo(f"Error: {exc}", err=True)
            code = EXIT_NON_CONVERGENCE
        if not standalone_mode:
            return code
        sys.exit(code if isinstance(code, int) else EXIT_OK)


def _write(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot write {out}: {exc.strerror}") from exc
    logger.info("wrote %s", out)


def _parse_floats(value: str | None) -> list[float] | None:
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"not a comma-separated list of numbers: {value!r}") from exc


@click.group(cls=IsospectralGroup)
@click.option("--log-level", default=None, help="Logging level (default from ISOSPECTRAL_LOG_LEVEL).")
def cli(log_level: str | None) -> None:
    """Isospectral deformations of the shifted harmonic oscillator."""
    logging_config(log_level).configure()


@cli.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="Flat key=value sweep file.")
@click.option("--out", type=click.Path(path_type=Path), help="Output file (default: stdout).")
@click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]))
@click.option("--lambda-min", type=float)
@click.option("--lambda-max", type=float)
@click.option("--lambda-count", type=int)
@click.option("--lambda-log/--lambda-linear", default=None)
@click.option("--temps", help="Comma-separated temperatures.")
@click.option("--measures", help="Comma-separated measure tags.")
@click.option("--include-ground/--no-ground", default=None)
@click.option("--threads", type=int)
@click.option("--no-timestamp", is_flag=True)
@click.pass_context
def sweep(
    ctx: click.Context,
    config_path: Path | None,
    fmt: str | None,
    temps: str | None,
    no_timestamp: bool,
    **flags: Any,
) -> None:
    """Evaluate the requested measures on a (T, lambda) grid.

    Flags override the keys of the config file; unset flags leave them alone.
    """
    from isospectral.repositories.report import has_non_converged, render_table, reports_frame
    from isospectral.sweep import run_sweep

    try:
        config = SweepConfig.load(
            config_path, format=fmt, temps=_parse_floats(temps), no_timestamp=no_timestamp or None, **flags
        )
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    reports = list(run_sweep(config))
    text = render_table(reports_frame(reports), config.format, "isospectral sweep", not config.no_timestamp)
    _write(text, config.out)
    if has_non_converged(reports):
        logger.warning("some cells did not converge; see the flags column")
        ctx.exit(EXIT_NON_CONVERGENCE)


@cli.command()
@click.argument("tag", type=click.Choice([t.value for t in FigureTag]))
@click.option("--out", type=click.Path(path_type=Path), help="Output file (default: stdout).")
@click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]), default=OutputFormat.CSV.value)
@click.option("--lambda-count", type=int, default=61, show_default=True)
@click.option("--threads", type=int, default=None)
@click.option("--no-timestamp", is_flag=True)
@click.pass_context
def figure(
    ctx: click.Context,
    tag: str,
    out: Path | None,
    fmt: str,
    lambda_count: int,
    threads: int | None,
    no_timestamp: bool,
) -> None:
    """Write the data behind one figure."""
    from isospectral.figures import figure_table
    from isospectral.repositories.report import NOT_CONVERGED, render_table

    if lambda_count < 1:
        raise click.BadParameter("must be at least 1", param_hint="--lambda-count")
    title, frame = figure_table(tag, threads or settings.threads, lambda_count)
    _write(render_table(frame, OutputFormat(fmt), title, not no_timestamp), out)
    if "flags" in frame and frame["flags"].fillna("").str.contains(f"{NOT_CONVERGED}|error").any():
        ctx.exit(EXIT_NON_CONVERGENCE)


@cli.command()
@click.option("--quick", is_flag=True, help="Reduced grids.")
@click.pass_context
def verify(ctx: click.Context, quick: bool) -> None:
    """Run the acceptance checks; exit 3 if any fails."""
    from isospectral.verification import format_results, run_checks

    results = run_checks(quick)
    click.echo(format_results(results))
    if not all(result.passed for result in results):
        ctx.exit(EXIT_VERIFY_FAILED)


@cli.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(host: str | None, port: int | None) -> None:
    """Serve the read-only HTTP API."""
    import uvicorn

    uvicorn.run("isospectral.api:app", host=host or settings.host, port=port or settings.port)


def main() -> None:
    cli.main(prog_name="isospectral")
