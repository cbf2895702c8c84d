"""Command-line entry point: catalog, inner, outer, table and enumerate."""

import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from . import __version__
from .bounds import (
    best_outer,
    build_thm1_lp,
    decoding_space,
    inner_bound,
    parse_delta_file,
    parse_groups_file,
)
from .catalog import CATALOG_SIZE, catalog_number, filter_catalog, get_entry
from .config import DEFAULT_JOBS, THM1_GROUNDING
from .errors import IndexCodingError
from .logger import RunLogger, setup_logging
from .lp import rationalize, write_lp
from .problem import (
    centralized_capacities,
    composite_rate_count,
    enumerate_nonisomorphic,
    parse_capacities_file,
    parse_problem,
    uniform_capacities,
)
from .report import run_table, to_csv, to_json
from .schemas import (
    BoundReport,
    CapacityProfile,
    DeltaSpace,
    DeltaStrategy,
    Objective,
    Problem,
    Scheme,
    TableClass,
)
from .utils import format_fraction, format_set, format_value, mask_of

app = typer.Typer(
    help="Inner and outer bounds for distributed index coding.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"


class DeltaOption(str, Enum):
    FULL = "full"
    MINMAX = "minmax"
    FILE = "file"


class ObjectiveOption(str, Enum):
    SUM = "sum"
    SYM = "sym"


class Grounding(str, Enum):
    UNION = "union"
    PER_SUBSET = "per_subset"


def _short(value: Optional[float]) -> str:
    """Rational when one is close enough, else 6 decimals."""
    if value is None:
        return "-"
    rational = rationalize(value)
    return format_fraction(rational) if rational is not None else f"{value:.6f}"


def _fail(message: str, code: int = 1) -> None:
    err_console.print(f"[red]Error:[/red] {escape(message)}")
    raise typer.Exit(code)


def _resolve_problem(no: Optional[int], text: Optional[str]) -> tuple[Problem, Optional[int]]:
    if (no is None) == (text is None):
        raise typer.BadParameter("give exactly one of --no and --problem")
    if no is not None:
        if not 1 <= no <= CATALOG_SIZE:
            raise typer.BadParameter(f"catalog numbers run from 1 to {CATALOG_SIZE}")
    try:
        if no is not None:
            return get_entry(no).problem, no
        return parse_problem(text), None
    except IndexCodingError as e:
        _fail(str(e))


def _resolve_caps(problem: Problem, cap: str, caps_file: Optional[Path], centralized: bool = False) -> CapacityProfile:
    if caps_file is not None:
        return parse_capacities_file(caps_file.read_text(encoding="utf-8"), problem.n)
    try:
        value = Fraction(cap)
    except (ValueError, ZeroDivisionError):
        raise typer.BadParameter(f"--cap {cap!r} is not a number")
    if centralized:
        return centralized_capacities(problem.n, value)
    return uniform_capacities(problem.n, value)


def _resolve_delta(problem: Problem, delta: Optional[DeltaOption], delta_file: Optional[Path]) -> Optional[DeltaSpace]:
    if delta_file is not None or delta == DeltaOption.FILE:
        if delta_file is None:
            raise typer.BadParameter("--delta file needs --delta-file")
        return parse_delta_file(delta_file.read_text(encoding="utf-8"), problem)
    if delta == DeltaOption.FULL:
        return decoding_space(problem, DeltaStrategy.FULL)
    if delta == DeltaOption.MINMAX:
        return decoding_space(problem, DeltaStrategy.MINIMAL_AND_MAXIMAL)
    return None


def _print_version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
    version: bool = typer.Option(
        False, "--version", help="Print version and exit", is_eager=True, callback=_print_version
    ),
):
    """Inner and outer bounds for distributed index coding."""
    setup_logging("DEBUG" if verbose else None, err_console)


# =============================================================================
# CATALOG
# =============================================================================

@app.command()
def catalog(
    no: Optional[int] = typer.Option(None, "--no", help="Catalog problem number"),
    table_class: Optional[TableClass] = typer.Option(None, "--class", help="Filter by reference class"),
    sum_rate: Optional[str] = typer.Option(None, "--sum-rate", help="Filter by reference sum rate, e.g. 56/3"),
    count: bool = typer.Option(False, "--count", help="Only print the number of matching entries"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
):
    """List catalog problems with their reference sum rates."""
    try:
        if no is not None:
            entries = [get_entry(no)]
        else:
            rate = Fraction(sum_rate) if sum_rate else None
            entries = filter_catalog(table_class, rate)
    except (KeyError, ValueError) as e:
        raise typer.BadParameter(str(e))
    except IndexCodingError as e:
        _fail(str(e))

    if count:
        typer.echo(len(entries))
        return
    if fmt == OutputFormat.JSON:
        typer.echo(json.dumps([e.model_dump(mode="json") for e in entries], indent=2))
    elif fmt == OutputFormat.CSV:
        typer.echo("problem_no,problem,sum_rate,class")
        for e in entries:
            typer.echo(f'{e.problem_no},"{e.problem.render()}",{format_fraction(e.table_sum_rate)},{e.table_class.value}')
    else:
        for e in entries:
            typer.echo(
                f"Problem No {e.problem_no}: {e.problem.render()}  "
                f"sum_rate={format_fraction(e.table_sum_rate)}  class={e.table_class.value}"
            )


# =============================================================================
# INNER / OUTER
# =============================================================================

@app.command()
def inner(
    no: Optional[int] = typer.Option(None, "--no", help="Catalog problem number"),
    problem_text: Optional[str] = typer.Option(None, "--problem", help='Problem text, e.g. "(1|-),(2|3),(3|2)"'),
    scheme: Scheme = typer.Option(Scheme.DIST, "--scheme"),
    cap: str = typer.Option("1", "--cap", help="Capacity of every server (of [n] for cc schemes)"),
    caps_file: Optional[Path] = typer.Option(None, "--caps-file", exists=True, dir_okay=False, help="J_mask=value lines"),
    objective: ObjectiveOption = typer.Option(ObjectiveOption.SUM, "--objective"),
    delta: Optional[DeltaOption] = typer.Option(None, "--delta", help="Decoding space (default: full for n <= 4)"),
    delta_file: Optional[Path] = typer.Option(None, "--delta-file", exists=True, dir_okay=False),
    groups_file: Optional[Path] = typer.Option(None, "--groups-file", exists=True, dir_okay=False, help="Server groups for --scheme fractional"),
    grow: bool = typer.Option(False, "--grow", help="Grow the decoding space greedily"),
    rounds: Optional[int] = typer.Option(None, "--rounds", min=0),
    candidates: Optional[int] = typer.Option(None, "--candidates", min=1),
    dump_lp: Optional[Path] = typer.Option(None, "--dump-lp", help="Write the LP in CPLEX LP format"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
):
    """Solve one composite coding scheme."""
    problem, problem_no = _resolve_problem(no, problem_text)
    centralized = scheme in (Scheme.CC, Scheme.CC_ENHANCED)
    try:
        caps = _resolve_caps(problem, cap, caps_file, centralized)
        space = _resolve_delta(problem, delta, delta_file)
        grouping = parse_groups_file(groups_file.read_text(encoding="utf-8"), problem.n) if groups_file else None
        goal = Objective.symmetric() if objective == ObjectiveOption.SYM else Objective.sum_rate()
        sink: list = []
        result = inner_bound(
            problem, scheme, caps, goal,
            delta=space, grouping=grouping, grow=grow,
            rounds=rounds, candidates=candidates, keep_lp=sink,
        )
    except IndexCodingError as e:
        _fail(str(e))

    if dump_lp is not None and sink:
        path = write_lp(sink[-1], dump_lp)
        err_console.print(f"LP written to {path}")

    if fmt == OutputFormat.JSON:
        typer.echo(result.model_dump_json(indent=2))
        return
    label = f"problem {problem_no}" if problem_no else problem.render()
    typer.echo(f"{label}  scheme={scheme.value}  objective={result.objective.kind.value}")
    typer.echo(f"value={_short(result.value)}  ({format_value(result.value, result.rational_value)})")
    typer.echo("rates=" + " ".join(f"{r:.6f}" for r in result.rates))
    grown = " (grown)" if result.delta_used.grown else ""
    # one server in the centralized schemes, so only K ⊆ [n]
    composite = (1 << problem.n) - 1 if centralized else composite_rate_count(problem.n)
    typer.echo(
        f"delta={result.delta_used.strategy.value} |Δ|={result.delta_used.size}{grown}  "
        f"lp={result.lp_variables} vars/{result.lp_constraints} rows/{result.lp_nonzeros} nnz  "
        f"composite_rates={composite}  "
        f"time={result.solve_seconds:.3f}s"
    )


@app.command()
def outer(
    no: Optional[int] = typer.Option(None, "--no", help="Catalog problem number"),
    problem_text: Optional[str] = typer.Option(None, "--problem", help="Problem text"),
    cap: str = typer.Option("1", "--cap", help="Capacity of every server"),
    caps_file: Optional[Path] = typer.Option(None, "--caps-file", exists=True, dir_okay=False),
    grounding: Grounding = typer.Option(Grounding(THM1_GROUNDING), "--grounding"),
    dump_lp: Optional[Path] = typer.Option(None, "--dump-lp", help="Write the polymatroidal LP in CPLEX LP format"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
):
    """Polymatroidal and closure-based outer bounds on the sum rate."""
    problem, problem_no = _resolve_problem(no, problem_text)
    try:
        caps = _resolve_caps(problem, cap, caps_file)
        result = best_outer(problem, caps, grounding.value)
        if dump_lp is not None:
            path = write_lp(build_thm1_lp(problem, caps, grounding.value), dump_lp)
            err_console.print(f"LP written to {path}")
    except IndexCodingError as e:
        _fail(str(e))

    if fmt == OutputFormat.JSON:
        typer.echo(result.model_dump_json(indent=2))
        return
    thm2 = format_fraction(result.thm2_value) if result.thm2_value is not None else "inapplicable"
    line = f"thm1={_short(result.thm1_value)} thm2={thm2} best={_short(result.best)}"
    if result.thm2_witness:
        u, v = result.thm2_witness
        line += f" U={format_set(mask_of(u))} V={format_set(mask_of(v))}"
    label = f"problem {problem_no}" if problem_no else problem.render()
    typer.echo(f"{label}  grounding={result.grounding}")
    typer.echo(line)


# =============================================================================
# TABLE
# =============================================================================

def _report_table(reports: list[BoundReport]) -> Table:
    table = Table(title="Sum-rate bounds, unit capacities")
    for column in ("No", "inner", "thm1", "thm2", "best", "class", "reference", "match"):
        table.add_column(column)
    for r in reports:
        style = "red" if r.error else ("yellow" if r.classification.value != "sum_capacity_established" else None)
        table.add_row(
            str(r.problem_no),
            _short(r.inner),
            _short(r.thm1),
            format_fraction(r.thm2) if r.thm2 is not None else "-",
            _short(r.best_outer),
            r.classification.value,
            format_fraction(r.table_expected),
            "-" if r.table_match is None else ("yes" if r.table_match else "NO"),
            style=style,
        )
    return table


@app.command()
def table(
    jobs: int = typer.Option(DEFAULT_JOBS, "--jobs", "-j", min=1),
    delta: DeltaOption = typer.Option(DeltaOption.FULL, "--delta", help="full or minmax"),
    numbers: Optional[list[int]] = typer.Option(None, "--no", help="Only these catalog problems (repeatable)"),
    grounding: Grounding = typer.Option(Grounding(THM1_GROUNDING), "--grounding"),
    nonenhanced: bool = typer.Option(False, "--nonenhanced", help="Also run the non-enhanced scheme"),
    fmt: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write csv/json here instead of stdout"),
    check_table: bool = typer.Option(False, "--check-table", help="Fail unless every inner value matches the reference table"),
    log: bool = typer.Option(True, "--log/--no-log", help="Write a JSON run log under IC_LOGS_DIR"),
):
    """Evaluate the catalog and compare with the reference table."""
    if delta == DeltaOption.FILE:
        raise typer.BadParameter("table takes --delta full or minmax")
    if output is not None and fmt == OutputFormat.TEXT:
        raise typer.BadParameter("--output needs --format csv or json")
    strategy = DeltaStrategy.FULL if delta == DeltaOption.FULL else DeltaStrategy.MINIMAL_AND_MAXIMAL
    if numbers and any(not 1 <= no <= CATALOG_SIZE for no in numbers):
        raise typer.BadParameter(f"catalog numbers run from 1 to {CATALOG_SIZE}")

    run_log = RunLogger("table")
    run_log.set_metadata(delta=strategy.value, grounding=grounding.value, jobs=jobs, nonenhanced=nonenhanced)
    try:
        result = run_table(
            jobs=jobs,
            strategy=strategy,
            grounding=grounding.value,
            nonenhanced=nonenhanced,
            problem_numbers=numbers or None,
        )
    except IndexCodingError as e:
        _fail(str(e))

    for r in result.reports:
        run_log.add_report(r)
        if r.error:
            run_log.add_failure(r.problem_no, r.error)
    run_log.set_summary(result.summary)
    if log:
        err_console.print(f"run log: {run_log.save()}")

    if fmt == OutputFormat.TEXT:
        console.print(_report_table(result.reports))
        s = result.summary
        console.print(
            f"total={s.total} thm1_matches={s.thm1_matches} thm2_rescues={s.thm2_rescues} "
            f"established={s.established} gaps={len(s.gaps)} failures={len(s.failures)}"
        )
        if s.gaps:
            console.print("gaps: " + ", ".join(map(str, s.gaps)))
        if s.enhancement_separations is not None:
            console.print(f"enhancement separations: {len(s.enhancement_separations)}")
    else:
        text = to_json(result) if fmt == OutputFormat.JSON else to_csv(result.reports)
        if output is not None:
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text(text, encoding="utf-8")
            err_console.print(f"written to {output}")
        else:
            typer.echo(text, nl=False)

    failed = bool(result.summary.failures)
    if check_table and any(r.table_match is not True for r in result.reports):
        err_console.print(f"[red]Reference mismatches:[/red] {result.summary.table_mismatches}")
        failed = True
    if failed:
        raise typer.Exit(1)


# =============================================================================
# ENUMERATE
# =============================================================================

@app.command(name="enumerate")
def enumerate_cmd(
    n: int = typer.Option(..., "--n", min=1, help="Number of messages"),
    count: bool = typer.Option(False, "--count", help="Only print the number of classes"),
):
    """List one problem per isomorphism class."""
    problems = enumerate_nonisomorphic(n)
    if count:
        typer.echo(len(problems))
        return
    for p in problems:
        try:
            no = catalog_number(p)
        except IndexCodingError as e:
            _fail(str(e))
        suffix = f"  (Problem No {no})" if no is not None else ""
        typer.echo(f"{p.render()}{suffix}")


if __name__ == "__main__":
    app()
