"""Outer bounds: the polymatroidal LP and the closure-based sum-rate bound."""

import logging
from fractions import Fraction
from typing import Optional

from ..closure import closure_mask, compute_u_mask, condition1_mask, v_candidate_masks
from ..config import SOLVER_TOL, THM1_GROUNDING
from ..lp import ConstraintSense, LinearProgram, LPBuilder, solve_optimal
from ..schemas import CapacityProfile, OuterBoundResult, Problem, Thm2Bound
from ..utils import bit, full_mask, is_subset, members, submasks

logger = logging.getLogger(__name__)

GROUNDINGS = ("union", "per_subset")


def _touching(caps: CapacityProfile, s: int) -> Fraction:
    """Sum of C_J over servers J meeting S."""
    return sum((c for j, c in caps.items() if j & s), Fraction(0))


def build_thm1_lp(problem: Problem, caps: CapacityProfile, grounding: str = THM1_GROUNDING) -> LinearProgram:
    """Polymatroidal outer bound LP on the sum rate.

    For every nonempty T there is a set function f_T on the subsets of T
    with f_T(∅) = 0, imposed in elemental form (monotone at T,
    submodular on every pair). Each i in T is bounded by
    R_i <= f_T(B ∪ {i}) - f_T(B) with B = T minus (A_i ∪ {i}).

    Args:
        problem: Problem
        caps: Server capacities
        grounding: "union" caps f_T(T) by the capacity of servers meeting T;
            "per_subset" caps every f_T(S) by the capacity of servers meeting S

    Returns:
        LinearProgram maximizing R_1 + ... + R_n
    """
    if grounding not in GROUNDINGS:
        raise ValueError(f"unknown grounding {grounding!r}, expected one of {GROUNDINGS}")
    n = problem.n
    lp = LPBuilder(name=f"thm1_{grounding}", keep_row_names=True)
    rates = [lp.add_variable(f"R_{i}") for i in range(1, n + 1)]

    for t in range(1, full_mask(n) + 1):
        f = {s: lp.add_variable(f"f_{t}_{s}") for s in sorted(submasks(t))}

        def terms(*pairs: tuple[int, float]) -> list[tuple[int, float]]:
            # f_T(∅) = 0 drops out
            return [(f[s], v) for s, v in pairs if s]

        for i in members(t):
            lp.add_constraint(terms((t & ~bit(i), 1.0), (t, -1.0)), name=f"mono_{t}_{i}")

        items = members(t)
        for x in range(len(items)):
            for y in range(x + 1, len(items)):
                bi, bj = bit(items[x]), bit(items[y])
                rest = t & ~(bi | bj)
                for s in submasks(rest, include_empty=True):
                    lp.add_constraint(
                        terms((s | bi | bj, 1.0), (s, 1.0), (s | bi, -1.0), (s | bj, -1.0)),
                        name=f"sub_{t}_{s}_{items[x]}_{items[y]}",
                    )

        if grounding == "union":
            lp.add_constraint([(f[t], 1.0)], ConstraintSense.LE, float(_touching(caps, t)), name=f"ground_{t}")
        else:
            for s in f:
                lp.add_constraint([(f[s], 1.0)], ConstraintSense.LE, float(_touching(caps, s)), name=f"ground_{t}_{s}")

        for i in members(t):
            b = t & ~(problem.masks[i - 1] | bit(i))
            lp.add_constraint(
                [(rates[i - 1], 1.0)] + terms((b | bit(i), -1.0), (b, 1.0)),
                name=f"dec_{t}_{i}",
            )

    lp.set_objective({r: 1.0 for r in rates})
    return lp.build()


def thm1_polymatroid(
    problem: Problem,
    caps: CapacityProfile,
    grounding: str = THM1_GROUNDING,
    tol: float = SOLVER_TOL,
) -> float:
    """Polymatroidal outer bound on R_1 + ... + R_n.

    Raises:
        NumericalFailure: the solver did not finish
    """
    solution = solve_optimal(build_thm1_lp(problem, caps, grounding), tol)
    return solution.value


def _thm2_value(caps: CapacityProfile, u: int, v: int) -> Fraction:
    """Total capacity plus C_J over servers meeting V and not inside U ∪ V."""
    uv = u | v
    extra = sum((c for j, c in caps.items() if j & v and not is_subset(j, uv)), Fraction(0))
    return caps.total() + extra


def thm2_sum_bound(problem: Problem, caps: CapacityProfile) -> Optional[Thm2Bound]:
    """Closure-based sum-rate bound, minimized over minimal V passing Condition 1.

    Exact rational arithmetic; no LP is solved.

    Returns:
        Thm2Bound with the first minimizing (U, V), or None when no
        candidate V satisfies Condition 1
    """
    masks = problem.masks
    u = compute_u_mask(masks)
    best: Optional[Thm2Bound] = None
    for v in v_candidate_masks(masks, u):
        if not condition1_mask(masks, v):
            logger.debug("%s: V=%s fails Condition 1", problem, members(v))
            continue
        value = _thm2_value(caps, u, v)
        if best is None or value < best.value:
            best = Thm2Bound(value=value, u=members(u), v=members(v))
    return best


def thm2_non_minimal_scan(problem: Problem, caps: CapacityProfile) -> Optional[tuple[Fraction, tuple[int, ...]]]:
    """Look for a non-minimal V that would give a strictly smaller bound.

    Any V outside U that unlocks every message and passes Condition 1 is
    tried. The result is for logging only; the reported bound keeps to
    minimal V.

    Returns:
        (value, V) strictly below the minimal-V bound, or None
    """
    masks = problem.masks
    full = full_mask(problem.n)
    u = compute_u_mask(masks)
    minimal = thm2_sum_bound(problem, caps)
    best: Optional[tuple[Fraction, tuple[int, ...]]] = None
    for v in sorted(submasks(full & ~u, include_empty=True)):
        if closure_mask(masks, u | v)[0] != full or not condition1_mask(masks, v):
            continue
        value = _thm2_value(caps, u, v)
        if minimal is not None and value >= minimal.value:
            continue
        if best is None or value < best[0]:
            best = (value, members(v))
    if best is not None:
        logger.info(
            "%s: non-minimal V=%s gives %s (minimal V gives %s)",
            problem, best[1], best[0], minimal.value if minimal else "nothing",
        )
    return best


def best_outer(
    problem: Problem,
    caps: CapacityProfile,
    grounding: str = THM1_GROUNDING,
    tol: float = SOLVER_TOL,
) -> OuterBoundResult:
    """Both outer bounds and their minimum.

    Raises:
        NumericalFailure: from the polymatroidal LP
    """
    thm1 = thm1_polymatroid(problem, caps, grounding, tol)
    thm2 = thm2_sum_bound(problem, caps)
    best = thm1 if thm2 is None else min(thm1, float(thm2.value))
    return OuterBoundResult(
        thm1_value=thm1,
        thm2_value=thm2.value if thm2 else None,
        best=best,
        thm2_witness=(thm2.u, thm2.v) if thm2 else None,
        grounding=grounding,
    )
