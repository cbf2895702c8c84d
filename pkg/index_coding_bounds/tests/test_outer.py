"""Polymatroidal and closure-based outer bounds."""

import random
from fractions import Fraction

import pytest

from index_coding_bounds.bounds import (
    best_outer,
    build_thm1_lp,
    distributed_cc_allserver,
    thm1_polymatroid,
    thm2_non_minimal_scan,
    thm2_sum_bound,
)
from index_coding_bounds.problem import parse_problem, uniform_capacities

TOL = 1e-5


@pytest.mark.parametrize("grounding", ["union", "per_subset"])
def test_polymatroid_without_side_information(problem_1, unit_caps4, grounding):
    assert thm1_polymatroid(problem_1, unit_caps4, grounding) == pytest.approx(15.0, abs=TOL)


@pytest.mark.parametrize("grounding", ["union", "per_subset"])
def test_polymatroid_full_side_information(problem_218, unit_caps4, grounding):
    assert thm1_polymatroid(problem_218, unit_caps4, grounding) == pytest.approx(32.0, abs=TOL)


@pytest.mark.parametrize("grounding", ["union", "per_subset"])
def test_polymatroid_is_loose_on_problem_140(problem_140, unit_caps4, grounding):
    # sum capacity is 21; the closure bound closes the gap
    assert thm1_polymatroid(problem_140, unit_caps4, grounding) == pytest.approx(22.0, abs=TOL)


def test_polymatroid_scales_with_capacities(problem_218, unit_caps4):
    assert thm1_polymatroid(problem_218, unit_caps4.scaled(2)) == pytest.approx(64.0, abs=TOL)


def test_polymatroid_lp_rows(problem_140, unit_caps4):
    program = build_thm1_lp(problem_140, unit_caps4)
    names = set(program.row_names)
    assert "ground_15" in names
    assert "dec_15_1" in names
    assert any(name.startswith("sub_15_") for name in names)
    assert program.num_variables == 4 + sum(2 ** bin(t).count("1") - 1 for t in range(1, 16))


def test_polymatroid_rejects_unknown_grounding(problem_140, unit_caps4):
    with pytest.raises(ValueError):
        build_thm1_lp(problem_140, unit_caps4, "everything")


def test_closure_bound_problem_140(problem_140, unit_caps4):
    bound = thm2_sum_bound(problem_140, unit_caps4)
    assert bound.value == Fraction(21)
    assert bound.u == (1,)
    assert bound.v == (2,)


def test_closure_bound_inapplicable(problem_218, unit_caps4):
    assert thm2_sum_bound(problem_218, unit_caps4) is None


def test_closure_bound_when_everything_decodes_for_free(problem_1, unit_caps4):
    bound = thm2_sum_bound(problem_1, unit_caps4)
    assert bound.value == Fraction(15)
    assert bound.u == (1, 2, 3, 4)
    assert bound.v == ()


def test_closure_bound_scales_exactly(problem_140, unit_caps4):
    assert thm2_sum_bound(problem_140, unit_caps4.scaled(Fraction(3, 2))).value == Fraction(63, 2)


def test_closure_bound_three_messages():
    problem = parse_problem("(1|-),(2|1,3),(3|1,2)")
    bound = thm2_sum_bound(problem, uniform_capacities(3))
    # servers {2,3} and {1,2,3} meet V without fitting inside U ∪ V
    assert bound.u == (1,)
    assert bound.v == (2,)
    assert bound.value == Fraction(7 + 2)


def test_non_minimal_scan_finds_nothing_below_minimal(problem_140, unit_caps4):
    assert thm2_non_minimal_scan(problem_140, unit_caps4) is None


def test_best_outer(problem_140, unit_caps4):
    result = best_outer(problem_140, unit_caps4)
    assert result.thm2_value == Fraction(21)
    assert result.best == pytest.approx(21.0, abs=TOL)
    assert result.thm2_witness == ((1,), (2,))
    assert result.grounding == "union"


def test_best_outer_without_closure_bound(problem_218, unit_caps4):
    result = best_outer(problem_218, unit_caps4)
    assert result.thm2_value is None
    assert result.thm2_witness is None
    assert result.best == pytest.approx(32.0, abs=TOL)


@pytest.mark.parametrize("seed", range(20))
def test_bounds_survive_relabeling(random_problem, seed):
    problem = random_problem(2000 + seed, 3)
    perm = random.Random(seed).sample([1, 2, 3], 3)
    relabeled = problem.relabel(perm)
    caps = uniform_capacities(3)

    assert distributed_cc_allserver(relabeled, caps).value == pytest.approx(
        distributed_cc_allserver(problem, caps).value, abs=TOL
    )
    assert thm1_polymatroid(relabeled, caps) == pytest.approx(thm1_polymatroid(problem, caps), abs=TOL)
    before, after = thm2_sum_bound(problem, caps), thm2_sum_bound(relabeled, caps)
    assert (before is None) == (after is None)
    if before is not None:
        assert after.value == before.value
