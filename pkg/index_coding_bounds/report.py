"""Per-problem evaluation, catalog sweeps and report emission.

A sweep fans out one job per catalog problem:
    problem -> inner bound (dist, enhanced) -> outer bounds -> BoundReport
and assembles the reports in catalog order whatever order they finish in.
"""

import csv
import io
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, Iterable, Optional

from .bounds import best_outer, decoding_space, distributed_cc_allserver, thm2_non_minimal_scan
from .bounds.decoding import default_strategy
from .catalog import get_entry, load_catalog
from .closure import v_notions_differ
from .config import DEFAULT_JOBS, FULL_DELTA_MAX_N, MATCH_TOL, THM1_GROUNDING
from .errors import IndexCodingError
from .problem import uniform_capacities
from .schemas import (
    BoundReport,
    CapacityProfile,
    CatalogEntry,
    Classification,
    DeltaStrategy,
    Problem,
    TableClass,
    TableReport,
    TableSummary,
)
from .utils import format_fraction

logger = logging.getLogger(__name__)


def classify(inner: Optional[float], best: Optional[float], table_class: Optional[TableClass] = None) -> Classification:
    """Sum capacity is established iff the bounds meet within MATCH_TOL.

    Problems the table marks as open stay OPEN when the bounds do not
    meet, and so does anything that could not be evaluated.
    """
    if inner is None or best is None:
        return Classification.OPEN
    if abs(inner - best) <= MATCH_TOL:
        return Classification.SUM_CAPACITY_ESTABLISHED
    if table_class == TableClass.OPEN_STAR:
        return Classification.OPEN
    return Classification.GAP


def evaluate_problem(
    problem: Problem,
    caps: Optional[CapacityProfile] = None,
    entry: Optional[CatalogEntry] = None,
    strategy: Optional[DeltaStrategy] = None,
    grounding: str = THM1_GROUNDING,
    nonenhanced: bool = False,
) -> BoundReport:
    """Inner bound, outer bounds and their comparison for one problem.

    Errors are recorded on the report instead of raised.

    Args:
        problem: Problem
        caps: Capacities (default: all ones)
        entry: Catalog entry, for the reference comparison
        strategy: Decoding space strategy (default by problem size)
        grounding: Polymatroidal bound variant
        nonenhanced: Also run the non-enhanced scheme on the same Δ

    Returns:
        BoundReport
    """
    start = time.perf_counter()
    caps = caps or uniform_capacities(problem.n)
    report = BoundReport(
        problem_no=entry.problem_no if entry else None,
        problem_text=problem.render(),
        table_expected=entry.table_sum_rate if entry else None,
        table_class=entry.table_class if entry else None,
    )
    update: dict = {}
    try:
        delta = decoding_space(problem, strategy or default_strategy(problem, FULL_DELTA_MAX_N))
        inner = distributed_cc_allserver(problem, caps, delta=delta)
        update.update(inner=inner.value, inner_rational=inner.rational_value, delta_size=delta.size)
        if nonenhanced:
            update["inner_nonenhanced"] = distributed_cc_allserver(problem, caps, enhanced=False, delta=delta).value

        outer = best_outer(problem, caps, grounding)
        update.update(
            thm1=outer.thm1_value,
            thm2=outer.thm2_value,
            thm2_witness=outer.thm2_witness,
            best_outer=outer.best,
        )
        update["v_notions_differ"] = v_notions_differ(problem)
        thm2_non_minimal_scan(problem, caps)
    except IndexCodingError as e:
        logger.error("problem %s (%s): %s", report.problem_no or "-", problem, e)
        update["error"] = f"{type(e).__name__}: {e}"

    inner_value = update.get("inner")
    update["classification"] = classify(
        None if "error" in update else inner_value,
        update.get("best_outer"),
        report.table_class,
    )
    if entry is not None:
        update["table_match"] = inner_value is not None and abs(inner_value - float(entry.table_sum_rate)) <= MATCH_TOL
    update["seconds"] = time.perf_counter() - start
    return report.model_copy(update=update)


def _evaluate_catalog_problem(problem_no: int, strategy: Optional[DeltaStrategy], grounding: str, nonenhanced: bool) -> BoundReport:
    """Worker entry point; module-level so process pools can pickle it."""
    entry = get_entry(problem_no)
    return evaluate_problem(entry.problem, entry=entry, strategy=strategy, grounding=grounding, nonenhanced=nonenhanced)


def summarize(reports: Iterable[BoundReport], grounding: str = THM1_GROUNDING, nonenhanced: bool = False) -> TableSummary:
    """Aggregate counts of a sweep."""
    reports = list(reports)

    def near(a, b) -> bool:
        return a is not None and b is not None and abs(a - float(b)) <= MATCH_TOL

    ok = [r for r in reports if r.error is None]
    thm1_matches = [r for r in ok if near(r.inner, r.thm1)]
    rescues = [r for r in ok if not near(r.inner, r.thm1) and near(r.inner, r.thm2)]
    gaps = [r for r in ok if r.classification != Classification.SUM_CAPACITY_ESTABLISHED]
    gap_classes = Counter(r.table_class.value for r in gaps if r.table_class is not None)
    separations = None
    if nonenhanced:
        separations = [
            r.problem_no for r in ok
            if r.inner_nonenhanced is not None and r.inner - r.inner_nonenhanced > MATCH_TOL
        ]
    return TableSummary(
        total=len(reports),
        thm1_matches=len(thm1_matches),
        thm2_rescues=len(rescues),
        established=len(ok) - len(gaps),
        gaps=[r.problem_no for r in gaps],
        gap_classes=dict(sorted(gap_classes.items())),
        failures=[r.problem_no for r in reports if r.error is not None],
        table_mismatches=[r.problem_no for r in reports if r.table_match is False],
        enhancement_separations=separations,
        v_notion_differences=[r.problem_no for r in reports if r.v_notions_differ],
        grounding=grounding,
    )


def run_table(
    jobs: int = DEFAULT_JOBS,
    strategy: Optional[DeltaStrategy] = None,
    grounding: str = THM1_GROUNDING,
    nonenhanced: bool = False,
    problem_numbers: Optional[Iterable[int]] = None,
    on_report: Optional[Callable[[BoundReport], None]] = None,
) -> TableReport:
    """Evaluate catalog problems with unit capacities.

    Args:
        jobs: Worker processes (1 runs in-process)
        strategy: Decoding space strategy (default: full)
        grounding: Polymatroidal bound variant
        nonenhanced: Also run the non-enhanced scheme (for separation counts)
        problem_numbers: Subset of the catalog (default: all 218)
        on_report: Called with each report as it completes

    Returns:
        TableReport with reports in catalog order
    """
    numbers = sorted(problem_numbers) if problem_numbers is not None else [e.problem_no for e in load_catalog()]
    results_by_no: dict[int, BoundReport] = {}

    if jobs <= 1:
        for no in numbers:
            report = _evaluate_catalog_problem(no, strategy, grounding, nonenhanced)
            results_by_no[no] = report
            if on_report:
                on_report(report)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_evaluate_catalog_problem, no, strategy, grounding, nonenhanced): no
                for no in numbers
            }
            for future in as_completed(futures):
                no = futures[future]
                try:
                    report = future.result()
                except Exception as e:
                    # a worker that dies (e.g. out of memory) still yields a row
                    logger.error("problem %d: worker failed: %s", no, e)
                    entry = get_entry(no)
                    report = BoundReport(
                        problem_no=no,
                        problem_text=entry.problem.render(),
                        table_expected=entry.table_sum_rate,
                        table_class=entry.table_class,
                        table_match=False,
                        error=f"{type(e).__name__}: {e}",
                    )
                results_by_no[no] = report
                if on_report:
                    on_report(report)

    reports = [results_by_no[no] for no in numbers]
    return TableReport(reports=reports, summary=summarize(reports, grounding, nonenhanced))


# =============================================================================
# EMISSION
# =============================================================================

CSV_COLUMNS = [
    "problem_no",
    "problem",
    "inner",
    "inner_rational",
    "inner_nonenhanced",
    "thm1",
    "thm2",
    "best_outer",
    "classification",
    "table_expected",
    "table_class",
    "table_match",
    "u",
    "v",
    "delta_size",
    "seconds",
    "error",
]


def _num(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def to_csv(reports: Iterable[BoundReport]) -> str:
    """One CSV row per report."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        u, v = r.thm2_witness or ((), ())
        writer.writerow({
            "problem_no": r.problem_no if r.problem_no is not None else "",
            "problem": r.problem_text,
            "inner": _num(r.inner),
            "inner_rational": format_fraction(r.inner_rational) if r.inner_rational is not None else "",
            "inner_nonenhanced": _num(r.inner_nonenhanced),
            "thm1": _num(r.thm1),
            "thm2": format_fraction(r.thm2) if r.thm2 is not None else "",
            "best_outer": _num(r.best_outer),
            "classification": r.classification.value,
            "table_expected": format_fraction(r.table_expected) if r.table_expected is not None else "",
            "table_class": r.table_class.value if r.table_class else "",
            "table_match": "" if r.table_match is None else str(r.table_match).lower(),
            "u": " ".join(map(str, u)) if r.thm2_witness else "",
            "v": " ".join(map(str, v)) if r.thm2_witness else "",
            "delta_size": r.delta_size if r.delta_size is not None else "",
            "seconds": f"{r.seconds:.3f}",
            "error": r.error or "",
        })
    return buffer.getvalue()


def to_json(table: TableReport) -> str:
    return table.model_dump_json(indent=2)


def parse_json(text: str) -> TableReport:
    """Inverse of to_json."""
    return TableReport.model_validate_json(text)
