"""Composite coding inner bounds as linear programs.

All schemes share one construction. For every decoding tuple D a
receiver i first recovers the composite indices K inside D_i ∪ A_i
that touch D_i, then the messages of D_i:

    sum_{j in L} R_j(D) <= sum_{K ⊆ D_i ∪ A_i, K ∩ L != ∅} sum_{J ⊇ K} S_{K,J}(D)

for every nonempty L ⊆ D_i, while each server J must deliver every
composite index receiver i does not already know:

    sum_D sum_{K ⊆ J, K ⊄ A_i} S_{K,J}(D) <= C_J.

The enhanced schemes let S depend on D. The non-enhanced ones either
maximize over single tuples (linear objectives) or time-share tuples
with weights λ_D (hull LP). Centralized schemes are the distributed
ones with a single server holding [n].
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..config import FULL_DELTA_MAX_N, MAX_NONZEROS, RATIONAL_MAX_DEN, SOLVER_TOL
from ..errors import InvalidCapacityProfile, InvalidDecodingSet
from ..lp import ConstraintSense, LinearProgram, LPBuilder, rationalize, solve_optimal
from ..schemas import (
    CapacityProfile,
    DeltaDescriptor,
    DeltaSpace,
    DeltaStrategy,
    InnerBoundResult,
    Objective,
    ObjectiveKind,
    Problem,
    Scheme,
    ServerGrouping,
)
from ..utils import is_subset, members, popcount, submasks
from .decoding import (
    all_server_grouping,
    check_grouping,
    decoding_space,
    decoding_tuples,
    default_strategy,
    group_universe,
)
from .growth import grow_delta

logger = logging.getLogger(__name__)


@dataclass
class _Group:
    """One server group with its own decoding space."""
    servers: list[int]
    universe: int
    receivers: tuple[int, ...]
    tuples: list[tuple[int, ...]]
    # K -> servers of the group holding K
    holders: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        for k in submasks(self.universe):
            found = [j for j in self.servers if is_subset(k, j)]
            if found:
                self.holders[k] = found


@dataclass
class _Layout:
    """Where the interesting columns of a built rate LP live."""
    rate_cols: dict[int, list[int]]
    usage_cols: list[list[int]]
    t_col: Optional[int] = None


def _minimal_classes(side_info: Sequence[int], server: int) -> list[int]:
    """Inclusion-minimal traces A_i ∩ J; larger traces give weaker capacity rows."""
    traces = sorted({a & server for a in side_info}, key=lambda m: (popcount(m), m))
    out: list[int] = []
    for t in traces:
        if not any(is_subset(m, t) for m in out):
            out.append(t)
    return out


def _decoding_rows(a: int, d: int, holders: dict[int, list[int]]) -> tuple[list[int], list[tuple[tuple[int, ...], list[int]]]]:
    """Composite indices receiver i uses and its rows, one per nonempty L ⊆ D_i."""
    ks = sorted(k for k in submasks(d | a) if k & d and k in holders)
    rows = [(members(sub), [k for k in ks if k & sub]) for sub in sorted(submasks(d))]
    return ks, rows


def _build_rate_lp(
    problem: Problem,
    caps: CapacityProfile,
    groups: list[_Group],
    objective: Objective,
    *,
    hull: bool = False,
    split_capacity: bool = False,
    name: str = "rates",
    max_nonzeros: Optional[int] = MAX_NONZEROS,
) -> tuple[LinearProgram, _Layout]:
    """Assemble the composite coding LP for the given groups and tuples.

    Args:
        problem: Problem
        caps: Capacity profile
        groups: Server groups with their decoding tuples
        objective: Rate objective
        hull: Time-share tuples with weights λ_D instead of sharing capacity
        split_capacity: Give each group a capacity share C_J(P) <= C_J
        name: LP name
        max_nonzeros: Abort with DeltaTooLarge past this many nonzeros

    Returns:
        (program, column layout)
    """
    n = problem.n
    masks = problem.masks
    lp = LPBuilder(name=name, max_nonzeros=max_nonzeros)
    rate_cols: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    usage_cols: list[list[int]] = []
    share_cols: dict[int, list[int]] = {}
    lam_cols: list[int] = []

    for g, group in enumerate(groups):
        prefix = f"g{g}_" if len(groups) > 1 else ""
        side = [masks[i - 1] & group.universe for i in group.receivers]
        classes = {j: _minimal_classes(side, j) for j in group.servers}
        share = {}
        if split_capacity:
            for j in group.servers:
                share[j] = lp.add_variable(f"{prefix}C_{j}")
                share_cols.setdefault(j, []).append(share[j])
        capacity_rows: dict[tuple[int, int], list[int]] = {}
        row_cache: dict[tuple[int, int], tuple] = {}

        for t, tup in enumerate(group.tuples):
            tag = f"{prefix}d{t}"
            needed = []
            per_receiver = []
            for a, d in zip(side, tup):
                key = (a, d)
                if key not in row_cache:
                    row_cache[key] = _decoding_rows(a, d, group.holders)
                ks, rows = row_cache[key]
                needed.extend(ks)
                per_receiver.append(rows)

            k_cols: dict[int, int] = {}
            s_cols: list[tuple[int, int, int]] = []
            for k in sorted(set(needed)):
                servers = group.holders[k]
                cols = [lp.add_variable(f"{tag}_S_{k}_{j}") for j in servers]
                s_cols.extend((k, j, c) for j, c in zip(servers, cols))
                if len(cols) == 1:
                    k_cols[k] = cols[0]
                else:
                    k_cols[k] = lp.add_variable(f"{tag}_T_{k}")
                    lp.add_le([k_cols[k]] + cols, [1.0] + [-1.0] * len(cols))

            r_cols = {i: lp.add_variable(f"{tag}_R_{i}") for i in group.receivers}
            for i in group.receivers:
                rate_cols[i].append(r_cols[i])

            for i, rows in zip(group.receivers, per_receiver):
                for ls, ks in rows:
                    lp.add_le(
                        [r_cols[j] for j in ls] + [k_cols[k] for k in ks],
                        [1.0] * len(ls) + [-1.0] * len(ks),
                    )

            if hull:
                lam = lp.add_variable(f"{tag}_lambda")
                lam_cols.append(lam)
                usage_cols.append([lam])
                local_rows: dict[tuple[int, int], list[int]] = {}
                for k, j, c in s_cols:
                    for cls in classes[j]:
                        if k & ~cls:
                            local_rows.setdefault((j, cls), []).append(c)
                for (j, cls), cols in local_rows.items():
                    lp.add_le(cols + [lam], [1.0] * len(cols) + [-float(caps.capacity(j))])
            else:
                usage_cols.append(list(r_cols.values()))
                for k, j, c in s_cols:
                    for cls in classes[j]:
                        if k & ~cls:
                            capacity_rows.setdefault((j, cls), []).append(c)

        for (j, cls), cols in capacity_rows.items():
            if split_capacity:
                lp.add_le(cols + [share[j]], [1.0] * len(cols) + [-1.0])
            else:
                lp.add_le(cols, [1.0] * len(cols), float(caps.capacity(j)))

    for j, cols in share_cols.items():
        lp.add_le(cols, [1.0] * len(cols), float(caps.capacity(j)))
    if hull:
        lp.add_constraint([(c, 1.0) for c in lam_cols], ConstraintSense.EQ, 1.0)

    t_col = None
    if objective.kind == ObjectiveKind.SYMMETRIC_RATE:
        t_col = lp.add_variable("t")
        for i in range(1, n + 1):
            cols = rate_cols[i]
            lp.add_le([t_col] + cols, [1.0] + [-1.0] * len(cols))
        lp.set_objective({t_col: 1.0})
    else:
        if objective.kind == ObjectiveKind.WEIGHTED and len(objective.weights) != n:
            raise ValueError(f"expected {n} weights, got {len(objective.weights)}")
        coeffs = {}
        for i, cols in rate_cols.items():
            w = objective.weight(i)
            if w:
                coeffs.update((c, w) for c in cols)
        lp.set_objective(coeffs)

    return lp.build(), _Layout(rate_cols=rate_cols, usage_cols=usage_cols, t_col=t_col)


def _solve_layout(
    program: LinearProgram,
    layout: _Layout,
    n: int,
    scheme: Scheme,
    objective: Objective,
    descriptor: DeltaDescriptor,
    tol: float,
) -> InnerBoundResult:
    solution = solve_optimal(program, tol)
    x = np.maximum(solution.x, 0.0)
    rates = tuple(float(x[layout.rate_cols[i]].sum()) for i in range(1, n + 1))
    usage = tuple(float(x[cols].sum()) for cols in layout.usage_cols)
    return InnerBoundResult(
        scheme=scheme,
        objective=objective,
        value=solution.value,
        rational_value=rationalize(solution.value, RATIONAL_MAX_DEN),
        rates=rates,
        delta_used=descriptor,
        lp_variables=program.num_variables,
        lp_constraints=program.num_constraints,
        lp_nonzeros=program.nonzeros,
        solve_seconds=solution.seconds,
        tuple_usage=usage,
    )


def _all_server_group(problem: Problem, caps: CapacityProfile, delta: DeltaSpace) -> _Group:
    if caps.n != problem.n:
        raise InvalidCapacityProfile(f"capacity profile is for n={caps.n}, problem has n={problem.n}")
    servers = list(caps.active_servers())
    return _Group(
        servers=servers,
        universe=problem.full,
        receivers=delta.receivers,
        tuples=delta.mask_tuples(),
    )


def _resolve_delta(problem: Problem, delta: Optional[DeltaSpace]) -> DeltaSpace:
    if delta is None:
        return decoding_space(problem, default_strategy(problem, FULL_DELTA_MAX_N))
    if delta.receivers != tuple(range(1, problem.n + 1)):
        raise InvalidDecodingSet("decoding space does not match the problem's receivers")
    return delta


def _per_tuple_max(
    problem: Problem,
    caps: CapacityProfile,
    objective: Objective,
    delta: DeltaSpace,
    scheme: Scheme,
    tol: float,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Best single-tuple optimum; linear objectives attain the hull maximum there."""
    group = _all_server_group(problem, caps, delta)
    best: Optional[InnerBoundResult] = None
    best_index = 0
    best_lp = None
    seconds = 0.0
    descriptor = DeltaDescriptor(strategy=delta.strategy, size=delta.size)
    for t, tup in enumerate(group.tuples):
        single = _Group(servers=group.servers, universe=group.universe, receivers=group.receivers, tuples=[tup])
        program, layout = _build_rate_lp(problem, caps, [single], objective, name=f"{scheme.value}_d{t}")
        result = _solve_layout(program, layout, problem.n, scheme, objective, descriptor, tol)
        seconds += result.solve_seconds
        if best is None or result.value > best.value + tol:
            best, best_index, best_lp = result, t, program
    usage = [0.0] * delta.size
    usage[best_index] = 1.0
    logger.debug("%s: best single tuple %s -> %.6f", scheme.value, delta.tuples[best_index].render(), best.value)
    if keep_lp is not None:
        keep_lp.append(best_lp)
    return best.model_copy(update={"tuple_usage": tuple(usage), "solve_seconds": seconds})


def _solve_groups(
    problem: Problem,
    caps: CapacityProfile,
    groups: list[_Group],
    objective: Objective,
    scheme: Scheme,
    descriptor: DeltaDescriptor,
    *,
    hull: bool = False,
    split_capacity: bool = False,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    start = time.perf_counter()
    program, layout = _build_rate_lp(
        problem, caps, groups, objective,
        hull=hull, split_capacity=split_capacity, name=scheme.value,
    )
    build_seconds = time.perf_counter() - start
    if keep_lp is not None:
        keep_lp.append(program)
    result = _solve_layout(program, layout, problem.n, scheme, objective, descriptor, tol)
    logger.debug(
        "%s on %s: |Δ|=%d, %d vars, %d nnz, built in %.2fs -> %.6f",
        scheme.value, problem, descriptor.size, program.num_variables,
        program.nonzeros, build_seconds, result.value,
    )
    return result


# =============================================================================
# SCHEMES
# =============================================================================

def distributed_cc_allserver(
    problem: Problem,
    caps: CapacityProfile,
    objective: Optional[Objective] = None,
    enhanced: bool = True,
    delta: Optional[DeltaSpace] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """All-server distributed composite coding.

    Args:
        problem: Problem
        caps: Capacities of all 2^n - 1 servers
        objective: Sum rate (default), symmetric or weighted
        enhanced: Let composite rates depend on the decoding tuple
        delta: Decoding space (default by problem size)
        tol: Solver tolerance
        keep_lp: If given, the LP behind the result is appended to it

    Returns:
        InnerBoundResult

    Raises:
        DeltaTooLarge: the LP exceeds the nonzero cap
        NumericalFailure: the solver did not finish
    """
    objective = objective or Objective.sum_rate()
    delta = _resolve_delta(problem, delta)
    descriptor = DeltaDescriptor(strategy=delta.strategy, size=delta.size)
    if enhanced:
        scheme = Scheme.DIST
        group = _all_server_group(problem, caps, delta)
        return _solve_groups(problem, caps, [group], objective, scheme, descriptor, tol=tol, keep_lp=keep_lp)

    scheme = Scheme.DIST_NONENHANCED
    if objective.kind == ObjectiveKind.SYMMETRIC_RATE:
        group = _all_server_group(problem, caps, delta)
        return _solve_groups(problem, caps, [group], objective, scheme, descriptor, hull=True, tol=tol, keep_lp=keep_lp)
    return _per_tuple_max(problem, caps, objective, delta, scheme, tol, keep_lp)


def distributed_cc_hull(
    problem: Problem,
    caps: CapacityProfile,
    objective: Optional[Objective] = None,
    delta: Optional[DeltaSpace] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Non-enhanced scheme through the λ-weighted hull LP, for any objective."""
    objective = objective or Objective.sum_rate()
    delta = _resolve_delta(problem, delta)
    descriptor = DeltaDescriptor(strategy=delta.strategy, size=delta.size)
    group = _all_server_group(problem, caps, delta)
    return _solve_groups(
        problem, caps, [group], objective, Scheme.DIST_NONENHANCED, descriptor,
        hull=True, tol=tol, keep_lp=keep_lp,
    )


def centralized_cc_original(
    problem: Problem,
    c=1,
    objective: Optional[Objective] = None,
    delta: Optional[DeltaSpace] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Original composite coding over one server of capacity c.

    Sum and weighted rates take the best single decoding tuple; the
    symmetric rate solves the convex-hull LP.
    """
    caps = CapacityProfile.centralized(problem.n, c)
    result = distributed_cc_allserver(problem, caps, objective, enhanced=False, delta=delta, tol=tol, keep_lp=keep_lp)
    return result.model_copy(update={"scheme": Scheme.CC})


def centralized_cc_enhanced(
    problem: Problem,
    c=1,
    objective: Optional[Objective] = None,
    delta: Optional[DeltaSpace] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Enhanced composite coding over one server of capacity c."""
    caps = CapacityProfile.centralized(problem.n, c)
    result = distributed_cc_allserver(problem, caps, objective, enhanced=True, delta=delta, tol=tol, keep_lp=keep_lp)
    return result.model_copy(update={"scheme": Scheme.CC_ENHANCED})


def fractional_groups(
    problem: Problem,
    caps: CapacityProfile,
    grouping: ServerGrouping,
    strategy: DeltaStrategy,
) -> list[_Group]:
    """Groups restricted to active servers, each with its decoding space Δ(P)."""
    if strategy == DeltaStrategy.CUSTOM:
        raise InvalidDecodingSet("fractional composite coding builds Δ(P) per group; custom spaces are not supported")
    check_grouping(grouping, problem.n)
    groups = []
    for group in grouping.groups:
        servers = sorted(j for j in group if caps.capacity(j) > 0)
        if not servers:
            continue
        universe = group_universe(servers)
        receivers = members(universe)
        tuples = decoding_tuples(problem.masks, receivers, universe, strategy)
        groups.append(_Group(servers=servers, universe=universe, receivers=receivers, tuples=tuples))
    if not groups:
        raise InvalidCapacityProfile("no server group has positive capacity")
    return groups


def distributed_cc_fractional(
    problem: Problem,
    caps: CapacityProfile,
    grouping: Optional[ServerGrouping] = None,
    objective: Optional[Objective] = None,
    strategy: Optional[DeltaStrategy] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Fractional distributed composite coding.

    Every group P runs enhanced composite coding over its messages I(P)
    with side information A_i ∩ I(P), on a capacity share C_J(P); shares
    of a server add up to at most C_J.

    Args:
        problem: Problem
        caps: Server capacities
        grouping: Server groups (default: one group of all active servers)
        objective: Rate objective
        strategy: FULL or MINIMAL_AND_MAXIMAL, applied per group

    Returns:
        InnerBoundResult; delta_used.size counts tuples over all groups
    """
    objective = objective or Objective.sum_rate()
    grouping = grouping or all_server_grouping(caps)
    strategy = strategy or default_strategy(problem, FULL_DELTA_MAX_N)
    groups = fractional_groups(problem, caps, grouping, strategy)
    descriptor = DeltaDescriptor(strategy=strategy, size=sum(len(g.tuples) for g in groups))
    return _solve_groups(
        problem, caps, groups, objective, Scheme.FRACTIONAL, descriptor,
        split_capacity=True, tol=tol, keep_lp=keep_lp,
    )


def build_fractional_lp(
    problem: Problem,
    caps: CapacityProfile,
    grouping: ServerGrouping,
    objective: Optional[Objective] = None,
    strategy: DeltaStrategy = DeltaStrategy.FULL,
) -> LinearProgram:
    """The fractional LP without solving it (for dumps and structural checks)."""
    groups = fractional_groups(problem, caps, grouping, strategy)
    program, _ = _build_rate_lp(
        problem, caps, groups, objective or Objective.sum_rate(),
        split_capacity=True, name=Scheme.FRACTIONAL.value,
    )
    return program


# =============================================================================
# DISPATCH
# =============================================================================

def inner_bound(
    problem: Problem,
    scheme: Scheme,
    caps: CapacityProfile,
    objective: Optional[Objective] = None,
    delta: Optional[DeltaSpace] = None,
    grouping: Optional[ServerGrouping] = None,
    grow: bool = False,
    rounds: Optional[int] = None,
    candidates: Optional[int] = None,
    tol: float = SOLVER_TOL,
    keep_lp: Optional[list] = None,
) -> InnerBoundResult:
    """Run one composite coding scheme.

    Centralized schemes read their single capacity from server [n] and
    reject profiles with any other active server.

    Args:
        problem: Problem
        scheme: Scheme to run
        caps: Capacity profile
        objective: Rate objective (default sum rate)
        delta: Starting decoding space (default by problem size)
        grouping: Server groups for the fractional scheme
        grow: Grow the decoding space greedily from ``delta``
        rounds: Greedy rounds (default from config)
        candidates: Tuples tried per round (default from config)
        tol: Solver tolerance
        keep_lp: If given, the LP behind the result is appended to it

    Returns:
        InnerBoundResult
    """
    objective = objective or Objective.sum_rate()
    if scheme == Scheme.FRACTIONAL:
        if grow:
            logger.warning("fractional scheme builds Δ(P) per group; --grow is ignored")
        strategy = delta.strategy if delta is not None else None
        return distributed_cc_fractional(problem, caps, grouping, objective, strategy, tol, keep_lp)

    if scheme in (Scheme.CC, Scheme.CC_ENHANCED):
        top = problem.full
        if caps.n != problem.n or any(j != top for j in caps.active_servers()):
            raise InvalidCapacityProfile("centralized schemes take a single server holding every message")
        c = caps.capacity(top)
        centralized = centralized_cc_original if scheme == Scheme.CC else centralized_cc_enhanced

        def run(d: DeltaSpace, sink: Optional[list] = None) -> InnerBoundResult:
            return centralized(problem, c, objective, d, tol, sink)
    else:
        enhanced = scheme == Scheme.DIST

        def run(d: DeltaSpace, sink: Optional[list] = None) -> InnerBoundResult:
            return distributed_cc_allserver(problem, caps, objective, enhanced, d, tol, sink)

    delta = _resolve_delta(problem, delta)
    if not grow:
        return run(delta, keep_lp)

    result, grown = grow_delta(problem, run, delta, rounds=rounds, candidates=candidates)
    if keep_lp is not None:
        run(grown, keep_lp)
    return result
