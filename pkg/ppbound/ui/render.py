"""Rich tables for human-readable ppbound output."""

from rich.console import Console
from rich.table import Table
from rich.text import Text

from ppbound.analysis import AnalysisReport, VerificationSummary
from ppbound.arith import format_rational
from ppbound.bound import BoundReport, CaseReport
from ppbound.preperiodic import PreperiodicSet, ScanResult
from ppbound.reals import format_real
from ppbound.reduction import BadPrimeCensus

ACCENT_PINK = "#FF71CE"
ACCENT_CYAN = "#01CDFE"
ACCENT_PURPLE = "#B967FF"
ACCENT_YELLOW = "#FFFB96"
ACCENT_GREEN = "#05FFA1"

# Reals are shown shortened in tables; --json carries every digit
TABLE_DIGITS = 12


def _short(value) -> str:
    text = format_real(value)
    if "." in text and len(text) > TABLE_DIGITS + 2:
        return text[: TABLE_DIGITS + 2] + "…"
    return text


def _flag(ok: bool | None) -> Text:
    if ok is None:
        return Text("n/a", style="dim")
    if ok:
        return Text("yes", style=ACCENT_GREEN)
    return Text("NO", style=f"bold {ACCENT_PINK}")


def census_table(census: BadPrimeCensus) -> Table:
    table = Table(
        title=f"Places (s = {census.s}, s_inf = {census.s_inf})",
        title_style=ACCENT_CYAN,
    )
    table.add_column("place", style=ACCENT_PURPLE)
    table.add_column("bad")
    table.add_column("r_v")
    table.add_column("detail", style="dim")
    for report in census.reports:
        if report.place.is_archimedean:
            detail = (
                f"escape {_short(report.escape_radius)}, "
                f"filled <= {_short(report.filled_radius)}"
            )
            table.add_row(str(report.place), _flag(report.bad), "-", detail)
        else:
            detail = "plain good" if report.plain_good else ""
            table.add_row(str(report.place), _flag(report.bad), str(report.radius), detail)
    return table


def bound_table(report: BoundReport) -> Table:
    table = Table(title="Uniform bound", title_style=ACCENT_CYAN, show_header=False)
    table.add_column("key", style=ACCENT_PURPLE)
    table.add_column("value")
    table.add_row("row", report.row.value + (" (flagged)" if report.flagged else ""))
    table.add_row("sigma", _short(report.sigma))
    table.add_row("beta", str(report.beta))
    table.add_row("t", _short(report.t))
    table.add_row("M", _short(report.M))
    count = Text(str(report.count_bound), style=f"bold {ACCENT_YELLOW}")
    table.add_row("count bound", count)
    return table


def preperiodic_table(pre: PreperiodicSet) -> Table:
    table = Table(
        title=(
            f"Rational preperiodic points "
            f"({pre.finite_count} finite, {pre.total} with ∞)"
        ),
        title_style=ACCENT_CYAN,
    )
    table.add_column("x", style=ACCENT_PURPLE, justify="right")
    table.add_column("tail", justify="right")
    table.add_column("period", justify="right")
    for pt in pre.points:
        table.add_row(format_rational(pt.x), str(pt.tail), str(pt.period))
    return table


def verification_table(summary: VerificationSummary) -> Table:
    table = Table(title="Verification", title_style=ACCENT_CYAN, show_header=False)
    table.add_column("check", style=ACCENT_PURPLE)
    table.add_column("result")
    table.add_row(
        "product formula (coefficients)", _flag(summary.product_formula_coefficients)
    )
    table.add_row(
        "product formula (differences)", _flag(summary.product_formula_differences)
    )
    for check in summary.capbd:
        table.add_row(f"difference product at {check.place}", _flag(check.holds))
    for p, ok in sorted(summary.minrad.items()):
        table.add_row(f"minimal radius at {p}", _flag(ok))
    table.add_row("count <= bound", _flag(summary.count_consistent))
    table.add_row("forward invariant", _flag(summary.forward_invariant))
    table.add_row("refined quadratic bound", _flag(summary.refined_quadratic))
    return table


def scan_table(result: ScanResult, only_max: bool = False) -> Table:
    table = Table(
        title=(
            f"z^2 + c, c = j/{result.m * result.m} in "
            f"({format_rational(result.c_min)}, {format_rational(result.c_max)}]"
        ),
        title_style=ACCENT_CYAN,
    )
    table.add_column("c", style=ACCENT_PURPLE, justify="right")
    table.add_column("finite", justify="right")
    table.add_column("max tail", justify="right")
    table.add_column("cycles")
    best = result.max_count
    for entry in result.entries:
        if only_max and entry.finite_count != best:
            continue
        style = f"bold {ACCENT_YELLOW}" if entry.finite_count == best else ""
        table.add_row(
            format_rational(entry.c),
            Text(str(entry.finite_count), style=style),
            str(entry.max_tail),
            ",".join(str(n) for n in entry.cycle_lengths),
        )
    return table


def display_case(case: CaseReport, console: Console) -> None:
    where = f" at {case.place}" if case.place else ""
    console.print(f"Proof case {case.case}{where}: {case.reason}", style=ACCENT_GREEN)


def display_analysis(report: AnalysisReport, console: Console | None = None) -> None:
    """
    Print a full analysis.

    Args:
        report: AnalysisReport to show
        console: Rich Console instance (creates new one if not provided)
    """
    if console is None:
        console = Console()
    console.print(Text(f"phi(z) = {report.phi}", style=f"bold {ACCENT_PINK}"))
    console.print(census_table(report.census))
    console.print(bound_table(report.bound))
    console.print(preperiodic_table(report.preperiodic))
    console.print(verification_table(report.verification))
    if report.case is not None:
        display_case(report.case, console)
