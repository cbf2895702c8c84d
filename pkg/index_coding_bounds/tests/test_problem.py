"""Problem notation, isomorphism classes and capacity profiles."""

from fractions import Fraction

import pytest

from index_coding_bounds.catalog import load_catalog
from index_coding_bounds.errors import (
    DuplicateIndex,
    IndexOutOfRange,
    InvalidCapacityProfile,
    MalformedClause,
    ProblemParseError,
    SelfSideInformation,
)
from index_coding_bounds.problem import (
    canonical_form,
    canonical_masks,
    centralized_capacities,
    composite_rate_count,
    enumerate_nonisomorphic,
    parse_capacities_file,
    interfering_set,
    parse_problem,
    render_problem,
    uniform_capacities,
)
from index_coding_bounds.schemas import CapacityProfile, Problem


# =============================================================================
# PARSING
# =============================================================================

def test_parse_three_message_problem():
    problem = parse_problem("(1|-),(2|3),(3|2)")
    assert problem.n == 3
    assert problem.side_info == (frozenset(), frozenset({3}), frozenset({2}))
    assert problem.masks == (0b000, 0b100, 0b010)


def test_parse_ignores_whitespace():
    assert parse_problem(" (1 | -) , (2|3,  1),(3|2) ") == parse_problem("(1|-),(2|1,3),(3|2)")


def test_parse_accepts_semicolons_between_clauses():
    assert parse_problem("(1|2);(2|1)") == parse_problem("(1|2),(2|1)")


@pytest.mark.parametrize(
    "text, error",
    [
        ("(1|1)", SelfSideInformation),
        ("(1|2),(2|2)", SelfSideInformation),
        ("(1|3),(2|-)", IndexOutOfRange),
        ("(1|0),(2|-)", IndexOutOfRange),
        ("(1|2,2),(2|-)", DuplicateIndex),
        ("(2|-),(1|-)", MalformedClause),
        ("1|2", MalformedClause),
        ("(1|a),(2|-)", MalformedClause),
        ("(1|2,),(2|-)", MalformedClause),
        ("", MalformedClause),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_problem(text)


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse_problem("(1|1)")
    assert issubclass(ProblemParseError, ValueError)


def test_render_round_trip_over_catalog():
    for entry in load_catalog():
        text = render_problem(entry.problem)
        assert parse_problem(text) == entry.problem


def test_render_uses_dash_for_empty_side_information():
    assert Problem.from_sets([[], [1]]).render() == "(1|-),(2|1)"


def test_interfering_set():
    problem = parse_problem("(1|-),(2|1,4),(3|1,2),(4|1,2,3)")
    assert problem.interfering(1) == frozenset({2, 3, 4})
    assert problem.interfering(4) == frozenset()
    assert interfering_set(problem, 2) == frozenset({3})


# =============================================================================
# ISOMORPHISM
# =============================================================================

def test_canonical_form_is_relabeling_invariant(problem_140):
    relabeled = problem_140.relabel([2, 3, 4, 1])
    assert relabeled != problem_140
    assert canonical_form(relabeled) == canonical_form(problem_140)


def test_canonical_form_is_idempotent(problem_155):
    once = canonical_form(problem_155)
    assert canonical_form(once) == once


def test_canonical_form_separates_non_isomorphic_problems():
    one_way = parse_problem("(1|2),(2|-)")
    both_ways = parse_problem("(1|2),(2|1)")
    assert canonical_form(one_way) != canonical_form(both_ways)


def test_relabel_rejects_non_permutations(problem_140):
    with pytest.raises(ValueError):
        problem_140.relabel([1, 1, 2, 3])


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 3), (3, 16)])
def test_enumerate_small_counts(n, expected):
    assert len(enumerate_nonisomorphic(n)) == expected


def test_enumerate_four_messages_matches_catalog():
    found = {p.masks for p in enumerate_nonisomorphic(4)}
    assert len(found) == 218
    assert found == {canonical_masks(e.problem.masks) for e in load_catalog()}


def test_enumerate_rejects_zero():
    with pytest.raises(ValueError):
        enumerate_nonisomorphic(0)


# =============================================================================
# CAPACITIES
# =============================================================================

def test_uniform_capacities():
    caps = uniform_capacities(4)
    assert len(caps.capacities) == 15
    assert caps.total() == 15
    assert caps.active_servers() == tuple(range(1, 16))


def test_centralized_capacities():
    caps = centralized_capacities(3, Fraction(5, 2))
    assert caps.active_servers() == (7,)
    assert caps.capacity(7) == Fraction(5, 2)
    assert caps.total() == Fraction(5, 2)


def test_scaled_capacities():
    caps = uniform_capacities(2).scaled(Fraction(3, 2))
    assert caps.capacities == (Fraction(3, 2),) * 3


def test_parse_capacities_file():
    text = "15=2\n1 = 1/2  # first server\n\n# comment only\n6=0.25\n"
    caps = parse_capacities_file(text, 4)
    assert caps.capacity(15) == 2
    assert caps.capacity(1) == Fraction(1, 2)
    assert caps.capacity(6) == Fraction(1, 4)
    assert caps.capacity(3) == 0
    assert caps.active_servers() == (1, 6, 15)


@pytest.mark.parametrize(
    "text",
    [
        "15",
        "x=1",
        "16=1",
        "1=-1",
        "1=1\n1=2",
        "1=abc",
        "1=1/0",
    ],
)
def test_parse_capacities_file_errors(text):
    with pytest.raises(InvalidCapacityProfile):
        parse_capacities_file(text, 4)


def test_capacity_profile_rejects_wrong_length():
    with pytest.raises(ValueError):
        CapacityProfile(n=2, capacities=(1, 1))


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 5), (3, 19), (4, 65)])
def test_composite_rate_count(n, expected):
    assert composite_rate_count(n) == expected


def test_label_swap_gives_the_same_canonical_form():
    assert canonical_form(parse_problem("(1|2),(2|-)")) == canonical_form(parse_problem("(1|-),(2|1)"))
