"""Search-tree solver for post-unique instances.

A sequence that is not yet a plan always has a required variable-value pair:
some step's precondition (or the goal) needs (v, x) while the preceding
window of states does not deliver it.  Post-uniqueness means at most one
action produces (v, x), so the tree branches only on the insertion position
of that producer.  The tree enumerates every minimal plan of length <= k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .core import (ContractError, Instance, Plan, apply_action, classify,
                   validate_plan)
from .oracle import is_minimal_plan

OPEN = "open"
SUCCESS = "success"
FAILURE = "failure"


@dataclass(frozen=True)
class RequiredPair:
    variable: int
    value: int
    i: int  # start of the window in which the producer may be inserted
    j: int  # position needing the value: action position, or len(seq)+1 for the goal


@dataclass
class SearchNode:
    label: Plan
    depth: int
    status: str
    children: List[int]


@dataclass
class SearchResult:
    plans: Tuple[Plan, ...]
    nodes: List[SearchNode]

    @property
    def node_count(self) -> int:
        return len(self.nodes)


def _states_along(instance: Instance, seq: Plan):
    states = [instance.init]
    for aid in seq:
        states.append(apply_action(states[-1], instance.actions[aid]))
    return states


def _window_start(states, v: int, x: int, j: int) -> int:
    """Smallest i such that states i..j-1 all miss (v, x)."""
    i = j - 1
    while i > 0 and states[i - 1][v] != x:
        i -= 1
    return i


def find_required_pair(instance: Instance, seq: Plan) -> Optional[RequiredPair]:
    """The required pair with smallest j, then smallest variable and value;
    None exactly when seq is a valid plan."""
    states = _states_along(instance, seq)
    length = len(seq)
    for j in range(1, length + 1):
        action = instance.actions[seq[j - 1]]
        best = None
        for v in sorted(action.pre):
            x = action.pre[v]
            if states[j - 1][v] != x:
                best = (v, x)
                break
        if best is not None:
            v, x = best
            return RequiredPair(v, x, _window_start(states, v, x, j), j)
    for v in sorted(instance.goal):
        x = instance.goal[v]
        if states[length][v] != x:
            return RequiredPair(v, x, _window_start(states, v, x, length + 1),
                                length + 1)
    return None


def producer(instance: Instance, v: int, x: int) -> Optional[int]:
    """The unique action with eff[v] = x; requires a post-unique instance."""
    if not classify(instance).post_unique:
        raise ContractError("producer() requires a post-unique instance")
    for aid, action in enumerate(instance.actions):
        if action.eff.get(v) == x:
            return aid
    return None


def _producer_table(instance: Instance) -> Dict[Tuple[int, int], int]:
    table: Dict[Tuple[int, int], int] = {}
    for aid, action in enumerate(instance.actions):
        for v, x in action.eff.items():
            if (v, x) in table:
                raise ContractError(
                    f"two producers for variable {v} value {x}: "
                    "instance is not post-unique")
            table[(v, x)] = aid
    return table


def _insert(seq: Plan, pos: int, aid: int) -> Plan:
    """New sequence with aid as the pos-th element (1-based)."""
    return seq[:pos - 1] + (aid,) + seq[pos - 1:]


def solve_postunique(instance: Instance, k: int) -> SearchResult:
    """All minimal plans of length <= k, with the explored tree."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if not classify(instance).post_unique:
        raise ContractError("solve_postunique requires a post-unique instance")
    table = _producer_table(instance)
    node_budget = (k + 1) ** (k + 1)

    nodes: List[SearchNode] = [SearchNode((), 0, OPEN, [])]
    plans = set()
    stack = [0]
    while stack:
        node_id = stack.pop()
        node = nodes[node_id]
        seq = node.label
        if validate_plan(instance, seq).valid:
            node.status = SUCCESS
            plans.add(seq)
            continue
        pair = find_required_pair(instance, seq)
        aid = table.get((pair.variable, pair.value))
        if len(seq) == k or aid is None:
            node.status = FAILURE
            continue
        # Insertion slots i..j as list positions; slot 0 coincides with slot 1.
        children = []
        for pos in range(max(pair.i, 1), pair.j + 1):
            child = SearchNode(_insert(seq, pos, aid), node.depth + 1, OPEN, [])
            nodes.append(child)
            if len(nodes) > node_budget:
                raise AssertionError(
                    f"search tree exceeded {node_budget} nodes: "
                    "implementation bug")
            children.append(len(nodes) - 1)
        node.children = children
        # LIFO with reversed push keeps exploration in child order i..j.
        stack.extend(reversed(children))

    minimal = tuple(sorted((p for p in plans if is_minimal_plan(instance, p)),
                           key=lambda p: (len(p), p)))
    return SearchResult(minimal, nodes)


def minimal_plans(instance: Instance, k: int) -> Tuple[Plan, ...]:
    return solve_postunique(instance, k).plans
