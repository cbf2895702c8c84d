"""Bundled catalog of the 218 non-isomorphic four-message problems."""

import csv
import hashlib
import logging
import re
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from ..errors import CatalogCorrupt, ProblemParseError
from ..problem import canonical_masks, parse_problem
from ..schemas import CatalogEntry, Problem, TableClass

logger = logging.getLogger(__name__)


DATA_DIR = Path(__file__).parent / "data"
PROBLEMS_FILE = DATA_DIR / "problems.txt"
TABLE_FILE = DATA_DIR / "table1.csv"

CATALOG_SIZE = 218
CATALOG_N = 4

_LINE = re.compile(r"^Problem No (\d+): (\S+)$")
_CHECKSUM = re.compile(r"^# problems\.txt sha256=([0-9a-f]{64})$")


def _read_table(path: Path, problems_digest: str) -> dict[int, tuple[Fraction, TableClass]]:
    """Parse the reference-table sidecar, checking it was written against this problems file."""
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        match = _CHECKSUM.match(header)
        if not match:
            raise CatalogCorrupt(f"{path.name}: missing checksum header")
        if match.group(1) != problems_digest:
            raise CatalogCorrupt(f"{PROBLEMS_FILE.name} does not match the checksum in {path.name}")

        rows: dict[int, tuple[Fraction, TableClass]] = {}
        for record in csv.DictReader(f):
            try:
                no = int(record["problem_no"])
                value = Fraction(int(record["sum_rate_num"]), int(record["sum_rate_den"]))
                table_class = TableClass(record["table_class"])
            except (KeyError, ValueError, ZeroDivisionError, TypeError) as e:
                raise CatalogCorrupt(f"{path.name}: bad row {record!r}") from e
            if no in rows:
                raise CatalogCorrupt(f"{path.name}: problem {no} listed twice")
            if value <= 0:
                raise CatalogCorrupt(f"{path.name}: problem {no} has non-positive sum rate")
            rows[no] = (value, table_class)
    return rows


@lru_cache(maxsize=1)
def load_catalog() -> tuple[CatalogEntry, ...]:
    """Load and validate the catalog.

    Returns:
        218 entries ordered by problem number

    Raises:
        CatalogCorrupt: checksum, numbering, format or shape mismatch
    """
    try:
        raw = PROBLEMS_FILE.read_bytes()
    except OSError as e:
        raise CatalogCorrupt(f"cannot read {PROBLEMS_FILE}: {e}") from e
    digest = hashlib.sha256(raw).hexdigest()
    try:
        table = _read_table(TABLE_FILE, digest)
    except OSError as e:
        raise CatalogCorrupt(f"cannot read {TABLE_FILE}: {e}") from e

    entries = []
    seen_forms: dict[tuple[int, ...], int] = {}
    lines = [line for line in raw.decode("utf-8").splitlines() if line.strip()]
    for expected, line in enumerate(lines, start=1):
        match = _LINE.match(line.strip())
        if not match:
            raise CatalogCorrupt(f"line {expected}: not a 'Problem No K: ...' line")
        no = int(match.group(1))
        if no != expected:
            raise CatalogCorrupt(f"line {expected}: numbered {no}")
        try:
            problem = parse_problem(match.group(2))
        except ProblemParseError as e:
            raise CatalogCorrupt(f"problem {no}: {e}") from e
        if problem.n != CATALOG_N:
            raise CatalogCorrupt(f"problem {no} has {problem.n} messages")
        form = canonical_masks(problem.masks)
        if form in seen_forms:
            raise CatalogCorrupt(f"problem {no} is isomorphic to problem {seen_forms[form]}")
        seen_forms[form] = no
        if no not in table:
            raise CatalogCorrupt(f"problem {no} has no reference row")
        value, table_class = table[no]
        entries.append(CatalogEntry(problem_no=no, problem=problem, table_sum_rate=value, table_class=table_class))

    if len(entries) != CATALOG_SIZE:
        raise CatalogCorrupt(f"expected {CATALOG_SIZE} problems, found {len(entries)}")
    if set(table) != {e.problem_no for e in entries}:
        raise CatalogCorrupt("reference rows do not cover exactly the listed problems")
    logger.debug("catalog loaded: %d problems, sha256=%s", len(entries), digest[:12])
    return tuple(entries)


def get_entry(problem_no: int) -> CatalogEntry:
    """Catalog entry by number.

    Raises:
        KeyError: number outside 1..218
    """
    if not 1 <= problem_no <= CATALOG_SIZE:
        raise KeyError(f"no catalog problem {problem_no} (valid: 1..{CATALOG_SIZE})")
    return load_catalog()[problem_no - 1]


def get_problem(problem_no: int) -> Problem:
    return get_entry(problem_no).problem


@lru_cache(maxsize=1)
def _numbers_by_form() -> dict[tuple[int, ...], int]:
    return {canonical_masks(e.problem.masks): e.problem_no for e in load_catalog()}


def catalog_number(problem: Problem) -> Optional[int]:
    """Catalog number of the problem's isomorphism class, or None (n != 4)."""
    if problem.n != CATALOG_N:
        return None
    return _numbers_by_form().get(canonical_masks(problem.masks))


def filter_catalog(
    table_class: Optional[TableClass] = None,
    sum_rate: Optional[Fraction] = None,
) -> list[CatalogEntry]:
    """Entries matching every given criterion."""
    entries = list(load_catalog())
    if table_class is not None:
        entries = [e for e in entries if e.table_class == table_class]
    if sum_rate is not None:
        entries = [e for e in entries if e.table_sum_rate == sum_rate]
    return entries
