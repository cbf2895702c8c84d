"""Bundled catalog and its reference rows."""

from collections import Counter
from fractions import Fraction

import pytest

from index_coding_bounds.catalog import (
    CATALOG_SIZE,
    catalog_number,
    filter_catalog,
    get_entry,
    get_problem,
    load_catalog,
)
from index_coding_bounds.problem import canonical_masks, parse_problem
from index_coding_bounds.schemas import TableClass


def test_catalog_size_and_numbering():
    entries = load_catalog()
    assert len(entries) == CATALOG_SIZE == 218
    assert [e.problem_no for e in entries] == list(range(1, 219))
    assert all(e.problem.n == 4 for e in entries)


def test_catalog_entries_are_pairwise_non_isomorphic():
    forms = {canonical_masks(e.problem.masks) for e in load_catalog()}
    assert len(forms) == 218


@pytest.mark.parametrize(
    "no, text, value",
    [
        (1, "(1|-),(2|-),(3|-),(4|-)", Fraction(15)),
        (81, "(1|4),(2|3),(3|2),(4|1,3)", Fraction(47, 2)),
        (140, "(1|-),(2|1,4),(3|1,2),(4|1,2,3)", Fraction(21)),
        (218, "(1|2,3,4),(2|1,3,4),(3|1,2,4),(4|1,2,3)", Fraction(32)),
    ],
)
def test_known_entries(no, text, value):
    entry = get_entry(no)
    assert entry.problem == parse_problem(text)
    assert entry.table_sum_rate == value


def test_fractional_table_values():
    assert get_entry(46).table_sum_rate == Fraction(70, 3)
    assert get_entry(47).table_sum_rate == Fraction(56, 3)


def test_open_problems():
    open_ones = filter_catalog(table_class=TableClass.OPEN_STAR)
    assert [e.problem_no for e in open_ones] == [81, 112, 115, 119, 148]
    assert all(e.table_sum_rate == Fraction(47, 2) for e in open_ones)


def test_class_counts():
    counts = Counter(e.table_class for e in load_catalog())
    assert counts == {
        TableClass.NORMAL: 145,
        TableClass.BOLD: 53,
        TableClass.UNDERLINED: 4,
        TableClass.DOUBLE_UNDERLINED: 6,
        TableClass.OVERLINED: 5,
        TableClass.OPEN_STAR: 5,
    }


def test_filter_by_sum_rate():
    matches = filter_catalog(sum_rate=Fraction(56, 3))
    assert 47 in [e.problem_no for e in matches]
    assert all(e.table_sum_rate == Fraction(56, 3) for e in matches)


@pytest.mark.parametrize("no", [0, 219, -1])
def test_get_entry_out_of_range(no):
    with pytest.raises(KeyError):
        get_entry(no)


def test_catalog_number_finds_relabeled_problem():
    relabeled = get_problem(140).relabel([4, 3, 2, 1])
    assert catalog_number(relabeled) == 140


def test_catalog_number_outside_four_messages():
    assert catalog_number(parse_problem("(1|2),(2|1)")) is None
