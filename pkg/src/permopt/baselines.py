"""Greedy baselines, the brute-force ordering oracle, and the unconstrained
monotone-submodular greedy with its approximation-ratio lower bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .perms import Permutation
from .scheduler import Schedule, evaluate_schedule
from .subproblems import FLOW, MATCHING, Instance, best_matching, max_flow, step_value

BRUTE_FORCE_GUARD = 9


class GuardError(Exception):
    """Problem size exceeds an enumeration guard."""


def _cached_step_value(instance: Instance):
    cache = {}

    def value(realized) -> float:
        key = frozenset(realized)
        if key not in cache:
            cache[key] = step_value(instance, key)
        return cache[key]

    return value


def greedy_marginal(instance: Instance) -> Schedule:
    """At each step realize the element with the best marginal gain,
    ties broken by smallest element id."""
    value = _cached_step_value(instance)
    realized = []
    remaining = list(instance.orderable)
    order = []
    while remaining:
        base = value(realized)
        gain, pick = max(
            ((value(realized + [e]) - base, e) for e in remaining),
            key=lambda t: (t[0], -t[1]),
        )
        order.append(pick)
        realized.append(pick)
        remaining.remove(pick)
    return _from_order(instance, order, "greedy-marginal")


def greedy_optimal_first(instance: Instance) -> Schedule:
    """Realize the support of one optimal subproblem solution first (ordered
    by marginal gain), then the rest by marginal gain."""
    support = _optimal_support(instance)
    value = _cached_step_value(instance)
    realized = []
    order = []
    for pool in (sorted(support), [e for e in instance.orderable if e not in support]):
        pool = list(pool)
        while pool:
            base = value(realized)
            gain, pick = max(
                ((value(realized + [e]) - base, e) for e in pool),
                key=lambda t: (t[0], -t[1]),
            )
            order.append(pick)
            realized.append(pick)
            pool.remove(pick)
    return _from_order(instance, order, "greedy-first")


def _optimal_support(instance: Instance) -> set:
    """Orderable elements used by one optimal full-availability solution.

    Matchings: enumerated optimum, lexicographically smallest edge set among
    ties. Flows: arcs carrying positive flow in the deterministic
    augmenting-path run.
    """
    everything = set(instance.orderable) | set(instance.fixed)
    if instance.family == MATCHING:
        _, edges = best_matching(instance.matching, everything)
        support = set(edges)
    elif instance.family == FLOW:
        _, flow = max_flow(instance.flow, everything)
        support = {a for a, f in flow.items() if f > 1e-9}
    else:
        raise ValueError(f"unknown family {instance.family!r}")
    return support & set(instance.orderable)


def brute_force(instance: Instance) -> Schedule:
    """Evaluate every ordering; ties resolved by the lexicographically
    smallest realization order."""
    m = instance.m
    if m > BRUTE_FORCE_GUARD:
        raise GuardError(f"m={m} exceeds brute-force guard {BRUTE_FORCE_GUARD}")
    value = _cached_step_value(instance)
    best_total = -math.inf
    best_order = None
    for order in itertools.permutations(instance.orderable):
        total = 0.0
        realized = []
        for e in order:
            realized.append(e)
            total += value(realized)
        if total > best_total + 1e-12:
            best_total = total
            best_order = order
    return _from_order(instance, best_order, "brute")


def _from_order(instance: Instance, order, method) -> Schedule:
    index = {e: i for i, e in enumerate(instance.orderable)}
    p = Permutation.from_order([index[e] for e in order])
    s = evaluate_schedule(instance, p, method=method)
    return Schedule(s.permutation, s.step_values, s.total, method, order=s.order)


# ---------------------------------------------------------------------------
# unconstrained monotone-submodular greedy (§ set-function setting)


@dataclass(frozen=True)
class SetFunctionSpec:
    """Additive (modular) or coverage (monotone submodular) set function."""

    kind: str  # 'additive' | 'coverage'
    weights: tuple = ()  # additive: weight per element
    covers: tuple = ()  # coverage: per element, a frozenset of universe points

    def __post_init__(self):
        if self.kind not in ("additive", "coverage"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "additive" and any(w < 0 for w in self.weights):
            raise ValueError("additive weights must be nonnegative for monotonicity")

    @property
    def m(self) -> int:
        return len(self.weights) if self.kind == "additive" else len(self.covers)

    def value(self, subset) -> float:
        if self.kind == "additive":
            return float(sum(self.weights[i] for i in subset))
        covered = set()
        for i in subset:
            covered |= self.covers[i]
        return float(len(covered))


def submodular_greedy(f: SetFunctionSpec, m: int | None = None) -> Schedule:
    """Greedy ordering by marginal gain; with no feasibility constraint the
    step-j value is simply f of the first j elements."""
    m = f.m if m is None else m
    chosen = []
    remaining = list(range(m))
    while remaining:
        base = f.value(chosen)
        gain, pick = max(
            ((f.value(chosen + [i]) - base, i) for i in remaining),
            key=lambda t: (t[0], -t[1]),
        )
        chosen.append(pick)
        remaining.remove(pick)
    values = []
    for j in range(1, m + 1):
        values.append(f.value(chosen[:j]))
    p = Permutation.from_order(chosen)
    return Schedule(p, tuple(values), sum(values), "greedy-marginal", order=tuple(chosen))


def brute_force_set_function(f: SetFunctionSpec) -> float:
    """Exhaustive optimum of the cumulative value over all orderings."""
    m = f.m
    if m > BRUTE_FORCE_GUARD:
        raise GuardError(f"m={m} exceeds brute-force guard {BRUTE_FORCE_GUARD}")
    # precompute f on all subsets (bitmask) so each ordering is table lookups
    table = [0.0] * (1 << m)
    for mask in range(1 << m):
        table[mask] = f.value([i for i in range(m) if mask >> i & 1])
    best = -math.inf
    for order in itertools.permutations(range(m)):
        total = 0.0
        mask = 0
        for e in order:
            mask |= 1 << e
            total += table[mask]
        best = max(best, total)
    return best


def ratio_bound(m: int) -> float:
    """Greedy guarantee for the unconstrained monotone-submodular case:
    (1/m) * sum_{j=1..m} (1 - (1 - 1/m)^j); decreases to 1/e from above.

    Evaluated via the geometric-series closed form 1 - q*(1 - q^m) with
    q = 1 - 1/m, which equals the sum and stays O(1) for large m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    q = 1.0 - 1.0 / m
    return 1.0 - q * (1.0 - q**m)
