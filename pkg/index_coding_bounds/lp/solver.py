"""HiGHS-backed solver for LinearProgram and rational reconstruction of optima."""

import logging
import time
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.sparse
from scipy.optimize import linprog

from ..config import RATIONAL_MAX_DEN, RATIONAL_TOL, SOLVER_TOL
from ..errors import NumericalFailure
from .model import LinearProgram, LPSolution, LPStatus

logger = logging.getLogger(__name__)

# scipy.optimize.linprog status codes
_STATUS = {
    0: LPStatus.OPTIMAL,
    2: LPStatus.INFEASIBLE,
    3: LPStatus.UNBOUNDED,
}


def rationalize(
    value: float,
    max_den: int = RATIONAL_MAX_DEN,
    tol: float = RATIONAL_TOL,
) -> Optional[Fraction]:
    """Best rational approximation with denominator <= max_den, if close enough.

    Args:
        value: Float to reconstruct (e.g. an LP optimum)
        max_den: Largest denominator allowed
        tol: Maximum distance between value and the returned fraction

    Returns:
        Fraction within tol of value, or None
    """
    if max_den < 1:
        raise ValueError("max_den must be at least 1")
    if value is None or not np.isfinite(value):
        return None
    candidate = Fraction(value).limit_denominator(max_den)
    if abs(float(candidate) - value) <= tol:
        return candidate
    return None


def _split_rows(lp: LinearProgram):
    """COO triplets -> (A_ub, b_ub, A_eq, b_eq) in CSR form."""
    n = lp.num_variables
    eq_rows = np.flatnonzero(lp.row_is_eq)
    ub_rows = np.flatnonzero(~lp.row_is_eq)

    def block(selected: np.ndarray):
        if selected.size == 0:
            return None, None
        renumber = np.full(lp.num_constraints, -1, dtype=np.int64)
        renumber[selected] = np.arange(selected.size)
        keep = renumber[lp.rows] >= 0
        matrix = scipy.sparse.coo_matrix(
            (lp.vals[keep], (renumber[lp.rows[keep]], lp.cols[keep])),
            shape=(selected.size, n),
        ).tocsr()
        return matrix, lp.rhs[selected]

    a_ub, b_ub = block(ub_rows)
    a_eq, b_eq = block(eq_rows)
    return a_ub, b_ub, a_eq, b_eq


def solve(lp: LinearProgram, tol: float = SOLVER_TOL, rational_max_den: int = RATIONAL_MAX_DEN) -> LPSolution:
    """Solve an LP with HiGHS.

    Infeasible and unbounded programs come back as solutions with that
    status; anything else the solver cannot settle raises.

    Args:
        lp: Program to solve
        tol: Primal/dual feasibility and optimality tolerance
        rational_max_den: Denominator cap for the rational reconstruction

    Returns:
        LPSolution with value in the program's own sense (max or min)

    Raises:
        NumericalFailure: iteration limit, numerical trouble or solver error
    """
    a_ub, b_ub, a_eq, b_eq = _split_rows(lp)
    cost = -lp.objective if lp.maximize else lp.objective
    bounds = np.column_stack((lp.lower, lp.upper))
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi) for lo, hi in bounds]

    start = time.perf_counter()
    try:
        res = linprog(
            cost,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
            options={
                "primal_feasibility_tolerance": tol,
                "dual_feasibility_tolerance": tol,
                "ipm_optimality_tolerance": tol,
                "presolve": True,
            },
        )
    except ValueError as e:
        raise NumericalFailure(f"{lp.name}: solver rejected the program: {e}") from e
    seconds = time.perf_counter() - start

    status = _STATUS.get(res.status)
    logger.debug(
        "%s: %d vars, %d rows, %d nnz -> status=%s value=%s (%.3fs)",
        lp.name, lp.num_variables, lp.num_constraints, lp.nonzeros,
        res.status, getattr(res, "fun", None), seconds,
    )
    if status is None:
        raise NumericalFailure(f"{lp.name}: {res.message}", status=res.status)
    if status != LPStatus.OPTIMAL:
        return LPSolution(
            status=status,
            variable_names=lp.variable_names,
            seconds=seconds,
            message=res.message,
        )

    value = -res.fun if lp.maximize else res.fun
    # HiGHS can return -0.0 for empty objectives
    value = float(value) + 0.0
    return LPSolution(
        status=status,
        value=value,
        x=np.asarray(res.x, dtype=float),
        variable_names=lp.variable_names,
        rational_value=rationalize(value, rational_max_den),
        seconds=seconds,
        message=res.message,
    )


def solve_optimal(lp: LinearProgram, tol: float = SOLVER_TOL) -> LPSolution:
    """Solve an LP that must have a finite optimum.

    Raises:
        NumericalFailure: the program is infeasible, unbounded or unsolved
    """
    solution = solve(lp, tol)
    if solution.status != LPStatus.OPTIMAL:
        raise NumericalFailure(f"{lp.name}: expected an optimum, solver reports {solution.status.value}")
    return solution
