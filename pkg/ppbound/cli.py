"""Command-line interface for ppbound."""

import json
import logging
import sys
from pathlib import Path
from typing import Annotated

import click
import typer
from rich.console import Console
from rich.logging import RichHandler

from ppbound import __version__
from ppbound.analysis import PolynomialAnalyzer
from ppbound.arith import format_rational, to_rational
from ppbound.bound import BoundInput, FieldKind, theorem_bound
from ppbound.errors import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    PolynomialParseError,
    PPBoundError,
)
from ppbound.parsing import parse_poly
from ppbound.preperiodic import enumerate_preperiodic
from ppbound.reduction import bad_census
from ppbound.resume import prepare_resume
from ppbound.scanner import QuadraticScanner
from ppbound.settings import load_settings
from ppbound.storage import StorageType, create_storage
from ppbound.ui import (
    bound_table,
    display_analysis,
    preperiodic_table,
    scan_table,
    verification_table,
)

logger = logging.getLogger(__name__)

console = Console()

# c = j/144 over (-12, 1/4] is the default scan
DEFAULT_SCAN_DENOMINATOR = 12
DEFAULT_SCAN_MIN = "-12"
DEFAULT_SCAN_MAX = "1/4"

app = typer.Typer(
    name="ppbound",
    help="""Rational preperiodic points and uniform bounds for polynomials over Q.

    Polynomials are written in z, e.g. "z^2 - 29/16" or "z^3 - (1/25)z".
    Run 'ppbound COMMAND --help' to see the options of a command.
    """,
    add_completion=False,
)


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"ppbound version {__version__}")
        raise typer.Exit()


def _fail(e: PPBoundError) -> typer.Exit:
    """Report a library error and build the matching exit."""
    if isinstance(e, PolynomialParseError) and e.position is not None:
        typer.echo(f"Error: {e}\n{e.pointer()}", err=True)
    else:
        typer.echo(f"Error: {e}", err=True)
    return typer.Exit(e.exit_code)


def _emit_json(data: dict) -> None:
    typer.echo(json.dumps(data, sort_keys=True, indent=2))


def _storage_for_resume(resume_file: str) -> str:
    """Backend that appends to the resume file itself."""
    if Path(resume_file).suffix.lower() == ".db":
        return StorageType.SQLITE.value
    return StorageType.CSV.value


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            "-v",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit.",
        ),
    ] = None,
    log_level: Annotated[
        str,
        typer.Option(
            "--log-level",
            help="Logging level written to stderr (DEBUG, INFO, WARNING, ERROR)",
        ),
    ] = "WARNING",
) -> None:
    """ppbound - rational preperiodic points and explicit bounds."""
    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        typer.echo(f"Error: Invalid log level '{log_level}'", err=True)
        raise typer.Exit(EXIT_USAGE)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


@app.command()
def analyze(
    poly: Annotated[str, typer.Argument(help='Polynomial in z, e.g. "z^2 - 29/16"')],
    as_json: Annotated[
        bool, typer.Option("--json", help="Emit the stable JSON report")
    ] = False,
    case: Annotated[
        bool, typer.Option("--case", help="Also report which proof case applies")
    ] = False,
    max_candidates: Annotated[
        int | None,
        typer.Option(
            "--max-candidates",
            help="Abort enumeration above this many candidates (PPB_MAX_CANDIDATES)",
        ),
    ] = None,
) -> None:
    """
    Census, bound, enumeration and cross-checks for one polynomial.
    """
    try:
        phi = parse_poly(poly)
        analyzer = PolynomialAnalyzer(max_candidates=max_candidates, include_case=case)
        report = analyzer.analyze(phi, poly)
    except PPBoundError as e:
        raise _fail(e) from e

    if as_json:
        _emit_json(report.to_dict())
    else:
        display_analysis(report, console)


@app.command()
def bound(
    poly: Annotated[
        str | None,
        typer.Argument(help="Polynomial in z; its census supplies d, s and s_inf"),
    ] = None,
    d: Annotated[int | None, typer.Option("--d", help="Degree of the map")] = None,
    field_degree: Annotated[
        int, typer.Option("--D", help="Degree [K:Q] of the number field")
    ] = 1,
    s: Annotated[int | None, typer.Option("--s", help="Number of bad places")] = None,
    s_inf: Annotated[
        int | None,
        typer.Option("--s-inf", help="Archimedean bad places (default 1, or 0 with --q)"),
    ] = None,
    q: Annotated[
        int | None,
        typer.Option("--q", help="Constant field size; selects a function field"),
    ] = None,
    as_json: Annotated[
        bool, typer.Option("--json", help="Emit the stable JSON report")
    ] = False,
) -> None:
    """
    Evaluate the uniform bound on the number of preperiodic points.

    Pass a polynomial, or the raw parameters --d and --s (plus --D, --s-inf
    or --q) for formula-only evaluation.
    """
    try:
        if poly is not None:
            if any(v is not None for v in (d, s, s_inf, q)):
                typer.echo("Error: Pass either a polynomial or --d/--s, not both", err=True)
                raise typer.Exit(EXIT_USAGE)
            phi = parse_poly(poly)
            bound_input = BoundInput.from_census(phi.degree, bad_census(phi))
        else:
            if d is None or s is None:
                typer.echo("Error: --d and --s are required without a polynomial", err=True)
                raise typer.Exit(EXIT_USAGE)
            if q is not None:
                bound_input = BoundInput(
                    d=d, s=s, s_inf=s_inf or 0, kind=FieldKind.FUNCTION_FIELD, q=q
                )
            else:
                bound_input = BoundInput.number_field(
                    d, s, 1 if s_inf is None else s_inf, field_degree
                )
        report = theorem_bound(bound_input)
    except PPBoundError as e:
        raise _fail(e) from e

    if as_json:
        _emit_json(report.to_dict())
    else:
        console.print(bound_table(report))


@app.command("enumerate")
def enumerate_command(
    poly: Annotated[str, typer.Argument(help='Polynomial in z, e.g. "z^2 - 29/16"')],
    as_json: Annotated[
        bool, typer.Option("--json", help="Emit the stable JSON report")
    ] = False,
    max_candidates: Annotated[
        int | None,
        typer.Option(
            "--max-candidates",
            help="Abort enumeration above this many candidates (PPB_MAX_CANDIDATES)",
        ),
    ] = None,
) -> None:
    """
    List every rational preperiodic point with its tail and period.
    """
    try:
        phi = parse_poly(poly)
        pre = enumerate_preperiodic(phi, max_candidates)
    except PPBoundError as e:
        raise _fail(e) from e

    if as_json:
        _emit_json(pre.to_dict())
        return

    console.print(preperiodic_table(pre))
    for cycle in pre.cycles():
        members = ", ".join(format_rational(x) for x in cycle)
        console.print(f"cycle of length {len(cycle)}: {members}")
    portrait = ", ".join(
        f"{n} x (tail {tail}, period {period})"
        for (tail, period), n in sorted(pre.portrait().items())
    )
    if portrait:
        console.print(f"portrait: {portrait}")


@app.command()
def scan(
    den: Annotated[
        int | None,
        typer.Option("--den", "-m", help="Scan c = j/m^2 (default 12, inferred on resume)"),
    ] = None,
    c_min: Annotated[
        str, typer.Option("--min", help="Exclusive lower end of the window")
    ] = DEFAULT_SCAN_MIN,
    c_max: Annotated[
        str, typer.Option("--max", help="Inclusive upper end of the window")
    ] = DEFAULT_SCAN_MAX,
    jobs: Annotated[
        int | None,
        typer.Option("--jobs", "-j", help="Worker processes (PPB_JOBS)"),
    ] = None,
    max_candidates: Annotated[
        int | None,
        typer.Option(
            "--max-candidates",
            help="Abort enumeration above this many candidates (PPB_MAX_CANDIDATES)",
        ),
    ] = None,
    storage: Annotated[
        str | None,
        typer.Option(
            "--storage",
            "-s",
            help=(
                "Storage backend for scan rows (csv, sqlite, dry-run). "
                "Defaults to the resume file's backend, else dry-run"
            ),
        ),
    ] = None,
    output_file: Annotated[
        str,
        typer.Option(
            "--output",
            "-o",
            help="Output file for CSV or database for SQLite",
        ),
    ] = "",
    resume_file: Annotated[
        str,
        typer.Option(
            "--resume",
            help="Resume an interrupted scan (CSV or SQLite file)",
        ),
    ] = "",
    session_id: Annotated[
        str,
        typer.Option(
            "--session-id",
            help=(
                "Manually specify session ID for grouping rows "
                "(auto-generated if not provided)"
            ),
        ),
    ] = "",
    new_session: Annotated[
        bool,
        typer.Option(
            "--new-session",
            help="Force a new session even when resuming",
        ),
    ] = False,
    only_max: Annotated[
        bool,
        typer.Option("--only-max", help="Show only the rows attaining the maximum"),
    ] = False,
    as_json: Annotated[
        bool, typer.Option("--json", help="Emit the stable JSON scan table")
    ] = False,
) -> None:
    """
    Count rational preperiodic points of z^2 + c over c = j/m^2 in (min, max].

    Only c whose reduced denominator is a perfect square are enumerated.
    """
    if storage is None and not output_file and resume_file:
        storage, output_file = _storage_for_resume(resume_file), resume_file
    try:
        storage_type = StorageType((storage or StorageType.DRY_RUN.value).lower())
    except ValueError as e:
        typer.echo(
            f"Error: Invalid storage '{storage}'. Choose from: csv, sqlite, dry-run",
            err=True,
        )
        raise typer.Exit(EXIT_USAGE) from e

    storage_kwargs = {}
    if output_file:
        if storage_type == StorageType.CSV:
            storage_kwargs["filename"] = output_file
        elif storage_type == StorageType.SQLITE:
            storage_kwargs["database"] = output_file

    settings = load_settings()
    workers = jobs if jobs is not None else settings.jobs

    try:
        low = to_rational(c_min)
        high = to_rational(c_max)

        values = None
        resume_session_id = None
        if resume_file:
            try:
                m, values, total, done = prepare_resume(resume_file, low, high, den)
            except FileNotFoundError as e:
                typer.echo(f"Error: {e}", err=True)
                raise typer.Exit(EXIT_USAGE) from e
            if not as_json:
                typer.echo(
                    f"Resuming from {resume_file}: {len(values)} of {total} "
                    f"parameters remaining ({done} already scanned)"
                )
            if not new_session and resume_file.endswith(".db"):
                temp_storage = create_storage(StorageType.SQLITE, database=resume_file)
                try:
                    resume_session_id = temp_storage.get_latest_session_id()
                finally:
                    temp_storage.close()
                if resume_session_id and not as_json:
                    typer.echo(f"Continuing previous session: {resume_session_id}")
        else:
            m = den if den is not None else DEFAULT_SCAN_DENOMINATOR

        scanner = QuadraticScanner(
            m,
            low,
            high,
            storage_type=storage_type,
            jobs=workers,
            max_candidates=max_candidates,
            session_id=session_id or resume_session_id,
            **storage_kwargs,
        )
    except PPBoundError as e:
        raise _fail(e) from e

    if not as_json:
        typer.echo(f"Session ID: {scanner.session_id}")
        typer.echo(f"Storage: {storage_type.value}")
        typer.echo(f"Workers: {workers}")

    try:
        result = scanner.scan(values)
    except PPBoundError as e:
        raise _fail(e) from e
    except KeyboardInterrupt:
        typer.echo("Scan interrupted by user.", err=True)
        raise typer.Exit(EXIT_USAGE) from None
    finally:
        scanner.cleanup()

    if as_json:
        _emit_json(result.to_dict())
        return

    console.print(scan_table(result, only_max=only_max))
    typer.echo(f"Parameters scanned: {len(result.entries)} (skipped {result.skipped})")
    typer.echo(
        f"Maximum finite count: {result.max_count} at "
        f"{', '.join(format_rational(c) for c in result.argmax)}"
    )


@app.command("verify")
def verify_command(
    poly: Annotated[str, typer.Argument(help='Polynomial in z, e.g. "z^2 - 29/16"')],
    as_json: Annotated[
        bool, typer.Option("--json", help="Emit the stable JSON summary")
    ] = False,
    max_candidates: Annotated[
        int | None,
        typer.Option(
            "--max-candidates",
            help="Abort enumeration above this many candidates (PPB_MAX_CANDIDATES)",
        ),
    ] = None,
) -> None:
    """
    Cross-check the census, bound and enumerated points of one polynomial.

    Exits with code 4 when a mandatory check fails.
    """
    try:
        phi = parse_poly(poly)
        report = PolynomialAnalyzer(max_candidates=max_candidates).analyze(phi, poly)
    except PPBoundError as e:
        raise _fail(e) from e

    summary = report.verification
    if as_json:
        _emit_json(summary.to_dict())
    else:
        console.print(verification_table(summary))
    if not summary.passed:
        if not as_json:
            typer.echo("Error: verification failed", err=True)
        raise typer.Exit(EXIT_INTERNAL)


def main() -> None:
    """Console entry point; usage errors exit with code 1."""
    try:
        code = app(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        typer.echo("Aborted!", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else EXIT_OK)


if __name__ == "__main__":
    main()
