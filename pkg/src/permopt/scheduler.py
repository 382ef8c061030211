"""Master LP assembly and exact schedule solving.

The master program couples three blocks: the position polytope (either the
compact doubly-stochastic extension or lazily generated prefix-sum cuts),
the chain transformation tying positions to per-step availability columns,
and one subproblem block per step. Its optimum equals the best cumulative
schedule value; the optimal ordering is read off the position variables
and re-certified against the combinatorial oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import lp as lpmod
from .lp import EQ, LinearConstraint, LpBuilder, solve as lp_solve
from .perms import (
    Permutation,
    birkhoff_extension,
    chain_transform_constraints,
    permutation_from_point,
    separate_permutahedron,
)
from .subproblems import Instance, emit_step, step_value

EXTENDED = "extended"
CUTTING_PLANE = "cutting-plane"

VALUE_TOL = 1e-6
MAX_CUT_ROUNDS = 1000
BNB_NODE_LIMIT = 10_000


class SolveError(Exception):
    """Master LP or repair failure."""


@dataclass
class Schedule:
    permutation: Permutation
    step_values: tuple
    total: float
    method: str  # lp | greedy-marginal | greedy-first | brute | evaluated
    order: tuple = ()  # element ids in realization order
    lp_bound: float | None = None
    certified: bool | None = None
    repaired: bool = False

    def __post_init__(self):
        assert abs(self.total - sum(self.step_values)) <= 1e-9 * max(1.0, abs(self.total))
        for a, b in zip(self.step_values, self.step_values[1:]):
            assert b >= a - 1e-9, "per-step values must be nondecreasing"
        if self.lp_bound is not None:
            assert self.total <= self.lp_bound + VALUE_TOL


@dataclass
class MasterVars:
    y: list
    h: list  # h[i][j], 0-indexed columns
    z: list | None  # doubly-stochastic vars (extended mode only)
    steps: list  # per-step dict element id -> var


def evaluate_schedule(instance: Instance, p: Permutation, method="evaluated") -> Schedule:
    """Cumulative value of a fixed ordering, straight from the oracles."""
    order = [instance.orderable[i] for i in p.order()]
    values = []
    realized = set()
    for e in order:
        realized.add(e)
        values.append(step_value(instance, realized))
    return Schedule(p, tuple(values), sum(values), method, order=tuple(order))


def build_master_lp(instance: Instance, mode: str = EXTENDED):
    """Assemble the master LP; returns (builder, MasterVars).

    The builder is returned rather than a frozen program so cutting-plane
    mode can keep appending violated prefix-sum cuts.
    """
    m = instance.m
    if m < 1:
        raise SolveError("instance has no orderable elements")
    b = LpBuilder()
    y = [b.add_var(f"y[{i}]", 1.0, float(m)) for i in range(m)]
    h = [[b.add_var(f"h[{i},{j}]", 0.0, 1.0) for j in range(m)] for i in range(m)]
    z = None
    if mode == EXTENDED:
        z, cons = birkhoff_extension(m, y, b)
        b.add_all(cons)
    elif mode == CUTTING_PLANE:
        b.add(LinearConstraint({v: 1.0 for v in y}, EQ, float(math.comb(m + 1, 2)),
                               name="position-sum"))
    else:
        raise SolveError(f"unknown mode {mode!r}")
    b.add_all(chain_transform_constraints(m, y, h))
    steps = []
    for j in range(1, m + 1):
        h_col = {e: h[i][j - 1] for i, e in enumerate(instance.orderable)}
        x, _, _ = emit_step(instance, j, h_col, b)
        steps.append(x)
    return b, MasterVars(y, h, z, steps)


def _solve_with_cuts(builder, y_vars, m, tol=1e-7):
    """Re-solve loop adding one most-violated prefix-sum cut per round."""
    for _ in range(MAX_CUT_ROUNDS):
        sol = lp_solve(builder.build("max"))
        if sol.status != lpmod.OPTIMAL:
            return sol
        y = [sol.x[v] for v in y_vars]
        cut = separate_permutahedron(m, y, tol)
        if cut is None:
            return sol
        builder.add(LinearConstraint({y_vars[i]: c for i, c in cut.coefficients.items()},
                                     cut.relation, cut.rhs, name=cut.name))
    raise SolveError("cut generation did not converge")


def solve_schedule(instance: Instance, mode: str = EXTENDED, tol: float = VALUE_TOL,
                   repair: str = "dp") -> Schedule:
    """Solve the master LP, extract the ordering, and certify it.

    The relaxation can sit strictly above the best schedule (per-step LP
    values are concave in the availability columns, so fractional positions
    overestimate), in which case the extracted ordering fails certification
    and integrality is repaired exactly: by dynamic programming over
    realized subsets (default) or by branch and bound on the
    doubly-stochastic variables (repair='bnb').
    """
    m = instance.m
    builder, mv = build_master_lp(instance, mode)
    if mode == CUTTING_PLANE:
        sol = _solve_with_cuts(builder, mv.y, m)
    else:
        sol = lp_solve(builder.build("max"))
    if sol.status != lpmod.OPTIMAL:
        raise SolveError(f"master LP status: {sol.status}")
    bound = sol.objective
    y = [sol.x[v] for v in mv.y]
    perm = permutation_from_point(y, tolerance=0.25)
    sched = evaluate_schedule(instance, perm, method="lp")
    if sched.total >= bound - tol:
        return Schedule(sched.permutation, sched.step_values, sched.total, "lp",
                        order=sched.order, lp_bound=bound, certified=True)
    if repair == "dp":
        best = _repair_subset_dp(instance)
    elif repair == "bnb":
        best = _repair_branch_and_bound(instance, bound, tol)
    else:
        raise SolveError(f"unknown repair strategy {repair!r}")
    if best.total < sched.total:
        best = sched
    return Schedule(best.permutation, best.step_values, best.total, "lp",
                    order=best.order, lp_bound=bound, certified=True, repaired=True)


def _repair_subset_dp(instance: Instance) -> Schedule:
    """Exact optimum by dynamic programming over realized subsets.

    best(S) = value(S) + max over e in S of best(S minus e); ties resolved
    toward the smallest last element so the reconstructed order is
    deterministic. Costs one oracle value per subset.
    """
    from .subproblems import step_value as sv

    elems = list(instance.orderable)
    m = len(elems)
    values = {}
    best = {frozenset(): 0.0}
    choice = {}
    # iterate subsets by cardinality
    subsets_by_size = [[] for _ in range(m + 1)]
    for mask in range(1 << m):
        subset = frozenset(elems[i] for i in range(m) if mask >> i & 1)
        subsets_by_size[len(subset)].append(subset)
    for size in range(1, m + 1):
        for subset in subsets_by_size[size]:
            values[subset] = sv(instance, subset)
            pick, pick_val = None, -math.inf
            for e in sorted(subset):
                cand = best[subset - {e}]
                if cand > pick_val + 1e-12:
                    pick, pick_val = e, cand
            best[subset] = values[subset] + pick_val
            choice[subset] = pick
    order = []
    subset = frozenset(elems)
    while subset:
        e = choice[subset]
        order.append(e)
        subset = subset - {e}
    order.reverse()
    index = {e: i for i, e in enumerate(elems)}
    perm = Permutation.from_order([index[e] for e in order])
    return evaluate_schedule(instance, perm)


def _repair_branch_and_bound(instance: Instance, root_bound: float, tol: float) -> Schedule:
    """Depth-first branch and bound fixing doubly-stochastic entries to 0/1."""
    builder, mv = build_master_lp(instance, EXTENDED)
    base_lower = list(builder.lower)
    base_upper = list(builder.upper)
    z_flat = [v for row in mv.z for v in row]
    best: Schedule | None = None
    nodes = 0
    stack = [{}]  # var -> fixed value
    while stack:
        fixes = stack.pop()
        nodes += 1
        if nodes > BNB_NODE_LIMIT:
            raise SolveError("integrality repair node limit exceeded")
        builder.lower = list(base_lower)
        builder.upper = list(base_upper)
        for var, val in fixes.items():
            builder.lower[var] = val
            builder.upper[var] = val
        sol = lp_solve(builder.build("max"))
        if sol.status != lpmod.OPTIMAL:
            continue
        if best is not None and sol.objective <= best.total + tol:
            continue
        frac_var, frac = None, 0.0
        for v in z_flat:
            d = abs(sol.x[v] - round(sol.x[v]))
            if d > frac + 1e-9:
                frac_var, frac = v, d
        if frac_var is None or frac <= 1e-6:
            perm = permutation_from_point([sol.x[v] for v in mv.y], tolerance=0.25)
            cand = evaluate_schedule(instance, perm)
            if best is None or cand.total > best.total + 1e-12:
                best = cand
            continue
        # branch toward 1 first (explored last-pushed-first on the stack)
        stack.append({**fixes, frac_var: 0.0})
        stack.append({**fixes, frac_var: 1.0})
    if best is None:
        raise SolveError("integrality repair found no feasible schedule")
    return best


def master_lp_value(instance: Instance, mode: str = EXTENDED) -> float:
    """Objective of the master LP relaxation (no extraction)."""
    builder, mv = build_master_lp(instance, mode)
    if mode == CUTTING_PLANE:
        sol = _solve_with_cuts(builder, mv.y, instance.m)
    else:
        sol = lp_solve(builder.build("max"))
    if sol.status != lpmod.OPTIMAL:
        raise SolveError(f"master LP status: {sol.status}")
    return sol.objective


def master_lp_value_fixed_y(instance: Instance, p: Permutation) -> float:
    """Master LP objective with the position variables pinned to a
    permutation; used to check the per-step blocks decouple."""
    builder, mv = build_master_lp(instance, EXTENDED)
    for i, v in enumerate(mv.y):
        builder.lower[v] = float(p.positions[i])
        builder.upper[v] = float(p.positions[i])
    sol = lp_solve(builder.build("max"))
    if sol.status != lpmod.OPTIMAL:
        raise SolveError(f"fixed-y master LP status: {sol.status}")
    return sol.objective
