"""LP modeling layer, HiGHS wrapper and LP dumps."""

from fractions import Fraction

import numpy as np
import pytest

from index_coding_bounds.errors import DeltaTooLarge, NumericalFailure
from index_coding_bounds.lp import (
    ConstraintSense,
    LPBuilder,
    LPStatus,
    format_lp,
    rationalize,
    solve,
    solve_optimal,
    write_lp,
)


def _two_variable_lp():
    """max x + 2y s.t. x + y <= 15, y <= 4."""
    lp = LPBuilder(name="toy", keep_row_names=True)
    x = lp.add_variable("x")
    y = lp.add_variable("y")
    lp.add_constraint({x: 1.0, y: 1.0}, ConstraintSense.LE, 15.0, name="total")
    lp.add_le([y], [1.0], 4.0, name="cap_y")
    lp.set_objective({x: 1.0, y: 2.0})
    return lp.build()


def test_single_variable():
    lp = LPBuilder()
    x = lp.add_variable("x")
    lp.add_le([x], [1.0], 1.0)
    lp.set_objective({x: 1.0})
    solution = solve_optimal(lp.build())
    assert solution.status == LPStatus.OPTIMAL
    assert solution.value == pytest.approx(1.0)
    assert solution.rational_value == Fraction(1)


def test_two_variables():
    solution = solve_optimal(_two_variable_lp())
    assert solution.value == pytest.approx(19.0)
    primal = solution.primal()
    assert primal["x"] == pytest.approx(11.0)
    assert primal["y"] == pytest.approx(4.0)


def test_equality_and_minimize():
    lp = LPBuilder()
    x = lp.add_variable("x")
    y = lp.add_variable("y")
    lp.add_constraint([(x, 1.0), (y, 1.0)], ConstraintSense.EQ, 3.0)
    lp.set_objective({x: 2.0, y: 1.0}, maximize=False)
    solution = solve_optimal(lp.build())
    assert solution.value == pytest.approx(3.0)


def test_repeated_columns_are_summed():
    lp = LPBuilder()
    x = lp.add_variable("x")
    lp.add_constraint([(x, 1.0), (x, 1.0)], ConstraintSense.LE, 4.0)
    lp.set_objective({x: 1.0})
    assert solve_optimal(lp.build()).value == pytest.approx(2.0)


def test_infeasible():
    lp = LPBuilder(name="infeasible")
    x = lp.add_variable("x")
    lp.add_le([x], [1.0], -1.0)
    lp.set_objective({x: 1.0})
    program = lp.build()
    assert solve(program).status == LPStatus.INFEASIBLE
    with pytest.raises(NumericalFailure):
        solve_optimal(program)


def test_unbounded_free_variable():
    lp = LPBuilder(name="unbounded")
    x = lp.add_variable("x", lower=None)
    lp.add_le([x], [1.0], 1.0)
    lp.set_objective({x: 1.0}, maximize=False)
    with pytest.raises(NumericalFailure):
        solve_optimal(lp.build())


def test_nonzero_cap():
    lp = LPBuilder(max_nonzeros=3)
    cols = [lp.add_variable(f"x{k}") for k in range(4)]
    with pytest.raises(DeltaTooLarge) as info:
        lp.add_le(cols, [1.0] * 4, 1.0)
    assert info.value.nonzeros == 4
    assert info.value.cap == 3


def test_build_rejects_undeclared_column():
    lp = LPBuilder()
    lp.add_variable("x")
    lp.add_le([1], [1.0], 1.0)
    with pytest.raises(ValueError):
        lp.build()


def test_permuting_variables_keeps_the_optimum():
    program = _two_variable_lp()
    permuted = program.permute_variables([1, 0])
    assert permuted.variable_names == ("y", "x")
    assert solve_optimal(permuted).value == pytest.approx(solve_optimal(program).value)


def test_scaling_rhs_scales_the_optimum():
    program = _two_variable_lp()
    assert solve_optimal(program.scaled_rhs(2.0)).value == pytest.approx(38.0)


def test_max_violation():
    program = _two_variable_lp()
    assert program.max_violation(np.array([11.0, 4.0])) == pytest.approx(0.0)
    assert program.max_violation(np.array([12.0, 5.0])) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "value, expected",
    [
        (18.666667, Fraction(56, 3)),
        (23.5, Fraction(47, 2)),
        (21.0000001, Fraction(21)),
        (0.2987, None),
        (float("nan"), None),
    ],
)
def test_rationalize(value, expected):
    assert rationalize(value) == expected


def test_format_lp():
    text = format_lp(_two_variable_lp())
    assert text.startswith("\\ toy\nMaximize\n")
    assert " obj: x + 2 y" in text
    assert " total_0: x + y <= 15" in text
    assert " cap_y_1: y <= 4" in text
    assert text.rstrip().endswith("End")


def test_write_lp(tmp_path):
    path = write_lp(_two_variable_lp(), tmp_path / "dumps" / "toy.lp")
    assert path.exists()
    assert "Subject To" in path.read_text(encoding="utf-8")
