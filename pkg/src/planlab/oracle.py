"""Exhaustive reference solvers: ground truth for every other solver.

shortest_plan runs breadth-first search over total states;
enumerate_minimal_plans brute-forces every action sequence up to the bound.
Both are deliberately simple and only meant for desk-scale instances.
"""

from __future__ import annotations

from itertools import product
from typing import Optional, Tuple

from . import kernels
from .core import Instance, Plan, PlanLabError, validate_plan

DEFAULT_BUDGET = 5_000_000


class BudgetExhausted(PlanLabError):
    """The visited-state cap was hit before the search finished."""

    def __init__(self, visited: int):
        self.visited = visited
        super().__init__(f"search budget exhausted after {visited} states")


def shortest_plan(instance: Instance, k: int,
                  budget: int = DEFAULT_BUDGET) -> Optional[Plan]:
    """A shortest valid plan of length <= k, lexicographically smallest
    among the shortest, or None."""
    plan, _ = shortest_plan_with_stats(instance, k, budget)
    return plan


def shortest_plan_with_stats(instance: Instance, k: int,
                             budget: int = DEFAULT_BUDGET):
    if k < 0:
        raise ValueError("k must be non-negative")
    actions = [(tuple(sorted(a.pre.items())), tuple(sorted(a.eff.items())))
               for a in instance.actions]
    goal = tuple(sorted(instance.goal.items()))
    status, plan, visited = kernels.bfs_core.bfs_shortest(
        instance.var_count, instance.domain_size, instance.init,
        actions, goal, k, budget)
    if status == kernels.bfs_core.EXHAUSTED:
        raise BudgetExhausted(visited)
    if status == kernels.bfs_core.FOUND:
        return tuple(plan), visited
    return None, visited


def is_valid_plan(instance: Instance, plan: Plan) -> bool:
    return validate_plan(instance, plan).valid


def _proper_subsequences(plan: Plan):
    n = len(plan)
    for mask in range((1 << n) - 1):  # excludes the full sequence
        yield tuple(plan[i] for i in range(n) if mask >> i & 1)


def is_minimal_plan(instance: Instance, plan: Plan) -> bool:
    """Valid, and no proper subsequence is valid.  Exponential; test-scale only."""
    if not is_valid_plan(instance, plan):
        return False
    return not any(is_valid_plan(instance, sub)
                   for sub in _proper_subsequences(plan))


def enumerate_minimal_plans(instance: Instance, k: int,
                            sequence_budget: int = 2_000_000
                            ) -> Tuple[Plan, ...]:
    """Every valid plan of length <= k without a valid proper subsequence,
    in length-then-lexicographic order."""
    if k < 0:
        raise ValueError("k must be non-negative")
    m = len(instance.actions)
    out = []
    tried = 0
    for length in range(k + 1):
        for seq in product(range(m), repeat=length):
            tried += 1
            if tried > sequence_budget:
                raise BudgetExhausted(tried)
            if is_minimal_plan(instance, seq):
                out.append(seq)
    return tuple(out)
