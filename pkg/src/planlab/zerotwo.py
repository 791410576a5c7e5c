"""Solver pipeline for instances with no preconditions and at most 2 effects.

Stages: (1) a chain transform that removes good actions with two effects,
raising the bound from k to k*(k+3)+1; (2) a reduction to directed Steiner
tree -- good actions become root arcs, mixed actions arcs from their bad to
their good variable; (3) the Dreyfus-Wagner dynamic program over terminal
subsets; (4) plan extraction by walking the tree bottom-up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .core import (Action, BAD, ContractError, GOOD, Instance, MIXED, Plan,
                   classify, delta_vars, effect_polarity, validate_plan)

ROOT = 0  # Steiner node 0 is the root; variable v is node v + 1

MAX_TERMINALS = 20


@dataclass(frozen=True)
class SteinerInstance:
    node_count: int
    arcs: Tuple[Tuple[int, int], ...]  # weight-1 arcs; absent arcs are infinite
    arc_action: Dict[Tuple[int, int], int]  # representative action per arc
    terminals: Tuple[int, ...]
    bound: int


@dataclass(frozen=True)
class TransformResult:
    instance: Instance
    bound: int  # k' = k*(k+3) + 1
    chains: Dict[int, Tuple[int, ...]]  # original action id -> chain ids, a_1 first
    source_action: Dict[int, int]  # chain action id -> original action id
    g_var: int
    g_reset: int  # id of the action that clears the shared flag variable
    dropped: Tuple[int, ...]  # original actions with no chain (bad / no-op)


@dataclass(frozen=True)
class DstSolution:
    weight: int
    arcs: Tuple[Tuple[int, int], ...]
    cells: int  # dynamic-programming table size, for --stats


@dataclass(frozen=True)
class ZeroTwoResult:
    plan: Optional[Plan]
    transformed: bool
    dst: SteinerInstance
    solution: Optional[DstSolution]


def _require_zero_two(instance: Instance) -> None:
    profile = classify(instance)
    if profile.max_pre != 0 or profile.max_eff > 2:
        raise ContractError(
            f"instance is not (0,2): max_pre={profile.max_pre} "
            f"max_eff={profile.max_eff}")


def _has_two_effect_good_action(instance: Instance) -> bool:
    return any(effect_polarity(instance, a).action == GOOD
               and len(instance.actions[a].eff) == 2
               for a in range(len(instance.actions)))


def eliminate_two_effect_good_actions(instance: Instance,
                                      k: int) -> TransformResult:
    """Replace every good and mixed action by a chain of k+3 two-effect
    actions with the same net payload; afterwards no good action touches
    two variables.  Bad and empty-effect actions are dropped (they never
    help a plan here)."""
    _require_zero_two(instance)
    if k < 0:
        raise ValueError("k must be non-negative")

    n = instance.var_count
    d = max(instance.domain_size, 2)
    var_names = list(instance.var_names)
    init = list(instance.init)
    goal = dict(instance.goal)

    def fresh_var(name: str) -> int:
        base = name
        bump = 0
        while name in var_names:
            bump += 1
            name = f"{base}.{bump}"
        var_names.append(name)
        init.append(0)
        goal[len(var_names) - 1] = 0
        return len(var_names) - 1

    g_var = fresh_var("gflag")

    actions: List[Action] = []
    names = {a.name for a in instance.actions}

    def fresh_action(name: str, eff: Dict[int, int]) -> int:
        base = name
        bump = 0
        while name in names:
            bump += 1
            name = f"{base}.{bump}"
        names.add(name)
        actions.append(Action(name, {}, eff))
        return len(actions) - 1

    chains: Dict[int, Tuple[int, ...]] = {}
    source: Dict[int, int] = {}
    dropped: List[int] = []

    for aid, action in enumerate(instance.actions):
        polarity = effect_polarity(instance, aid)
        if not action.eff or polarity.action == BAD:
            dropped.append(aid)
            continue
        cvars = [fresh_var(f"{action.name}+x{i}") for i in range(1, k + 3)]
        effs = sorted(action.eff.items())
        chain: List[int] = []
        if polarity.action == MIXED:
            (bad_v, bad_x), (good_v, good_x) = (
                (effs[0], effs[1]) if polarity.effects[0][1] == BAD
                else (effs[1], effs[0]))
            chain.append(fresh_action(f"{action.name}+c1",
                                      {bad_v: bad_x, cvars[0]: 0}))
            for i in range(2, k + 3):
                chain.append(fresh_action(
                    f"{action.name}+c{i}",
                    {cvars[i - 2]: 1, cvars[i - 1]: 0}))
            chain.append(fresh_action(f"{action.name}+c{k + 3}",
                                      {cvars[k + 1]: 1, good_v: good_x}))
        elif len(action.eff) == 1:
            (v, x), = effs
            chain.append(fresh_action(f"{action.name}+c1",
                                      {g_var: 1, cvars[0]: 0}))
            for i in range(2, k + 3):
                chain.append(fresh_action(
                    f"{action.name}+c{i}",
                    {cvars[i - 2]: 1, cvars[i - 1]: 0}))
            chain.append(fresh_action(f"{action.name}+c{k + 3}",
                                      {cvars[k + 1]: 1, v: x}))
        else:  # good with two effects: shared chain, two payload tails
            (v1, x1), (v2, x2) = effs
            chain.append(fresh_action(f"{action.name}+c1",
                                      {g_var: 1, cvars[0]: 0}))
            for i in range(2, k + 2):
                chain.append(fresh_action(
                    f"{action.name}+c{i}",
                    {cvars[i - 2]: 1, cvars[i - 1]: 0}))
            chain.append(fresh_action(f"{action.name}+c{k + 2}",
                                      {cvars[k]: 1, v1: x1}))
            chain.append(fresh_action(f"{action.name}+c{k + 3}",
                                      {cvars[k]: 1, v2: x2}))
        chains[aid] = tuple(chain)
        for cid in chain:
            source[cid] = aid

    g_reset = fresh_action("gflag+reset", {g_var: 0})

    transformed = Instance(
        var_count=len(var_names), domain_size=d, actions=tuple(actions),
        init=tuple(init), goal=goal, var_names=tuple(var_names))
    return TransformResult(transformed, k * (k + 3) + 1, chains, source,
                           g_var, g_reset, tuple(dropped))


def build_dst(instance: Instance, bound: int) -> SteinerInstance:
    """Arc rules: a good action's single variable hangs off the root; a mixed
    action points from its bad to its good variable.  Bad actions are
    dropped.  Parallel candidates collapse to the smallest action id."""
    _require_zero_two(instance)
    arc_action: Dict[Tuple[int, int], int] = {}
    for aid in range(len(instance.actions)):
        polarity = effect_polarity(instance, aid)
        if polarity.action == BAD or not polarity.effects:
            continue
        if polarity.action == GOOD:
            if len(polarity.effects) > 1:
                raise ContractError(
                    f"good action {instance.actions[aid].name!r} has two "
                    "effects; run the chain transform first")
            arc = (ROOT, polarity.effects[0][0] + 1)
        else:
            bad_v = next(v for v, t in polarity.effects if t == BAD)
            good_v = next(v for v, t in polarity.effects if t == GOOD)
            arc = (bad_v + 1, good_v + 1)
        arc_action.setdefault(arc, aid)
    return SteinerInstance(
        node_count=instance.var_count + 1,
        arcs=tuple(sorted(arc_action)),
        arc_action=arc_action,
        terminals=tuple(v + 1 for v in delta_vars(instance)),
        bound=bound)


INF = float("inf")


def _all_pairs(dst: SteinerInstance):
    """BFS distances and shortest-path predecessors over the weight-1 arcs."""
    n = dst.node_count
    adj: List[List[int]] = [[] for _ in range(n)]
    for tail, head in dst.arcs:
        adj[tail].append(head)
    dist = [[INF] * n for _ in range(n)]
    pred = [[-1] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        queue = [s]
        while queue:
            new = []
            for u in queue:
                for w in adj[u]:
                    if dist[s][w] == INF:
                        dist[s][w] = dist[s][u] + 1
                        pred[s][w] = u
                        new.append(w)
            queue = new
    return dist, pred


def _path_arcs(pred, s: int, t: int) -> List[Tuple[int, int]]:
    arcs = []
    while t != s:
        p = pred[s][t]
        arcs.append((p, t))
        t = p
    return arcs


def dreyfus_wagner(dst: SteinerInstance) -> Optional[DstSolution]:
    """Minimum-weight arborescence from the root covering all terminals,
    or None when the optimum exceeds the bound or a terminal is unreachable.
    Table indexed by (terminal subset, node)."""
    terms = dst.terminals
    t_count = len(terms)
    if t_count > MAX_TERMINALS:
        raise ContractError(
            f"{t_count} terminals exceed the hard cap of {MAX_TERMINALS}")
    if t_count == 0:
        return DstSolution(0, (), 0)
    n = dst.node_count
    dist, pred = _all_pairs(dst)

    full = (1 << t_count) - 1
    f = [[INF] * n for _ in range(full + 1)]
    # choice[mask][v]: ("leaf", t) | ("split", submask, via-node)
    choice: List[List[object]] = [[None] * n for _ in range(full + 1)]
    for ti, t in enumerate(terms):
        mask = 1 << ti
        for v in range(n):
            if dist[v][t] != INF:
                f[mask][v] = dist[v][t]
                choice[mask][v] = ("leaf", t)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue  # singleton, done above
        merged = [INF] * n
        merged_choice = [None] * n
        low = mask & -mask
        sub = (mask - 1) & mask
        while sub:
            if sub & low:  # enumerate each split once
                rest = mask ^ sub
                for u in range(n):
                    if f[sub][u] != INF and f[rest][u] != INF:
                        cost = f[sub][u] + f[rest][u]
                        if cost < merged[u]:
                            merged[u] = cost
                            merged_choice[u] = sub
            sub = (sub - 1) & mask
        for v in range(n):
            best, best_u = INF, -1
            for u in range(n):
                if merged[u] != INF and dist[v][u] != INF:
                    cost = dist[v][u] + merged[u]
                    if cost < best:
                        best, best_u = cost, u
            f[mask][v] = best
            if best_u >= 0:
                choice[mask][v] = ("split", merged_choice[best_u], best_u)

    cells = (full + 1) * n
    if f[full][ROOT] == INF or f[full][ROOT] > dst.bound:
        return None

    arcs: Set[Tuple[int, int]] = set()

    def collect(mask: int, v: int) -> None:
        what = choice[mask][v]
        if what[0] == "leaf":
            arcs.update(_path_arcs(pred, v, what[1]))
        else:
            _, sub, u = what
            arcs.update(_path_arcs(pred, v, u))
            collect(sub, u)
            collect(mask ^ sub, u)

    collect(full, ROOT)
    weight = int(f[full][ROOT])
    if len(arcs) != weight:
        raise AssertionError("reconstructed arc set disagrees with the "
                             "optimum weight")
    return DstSolution(weight, tuple(sorted(arcs)), cells)


def extract_plan(instance: Instance, dst: SteinerInstance,
                 arcs: Tuple[Tuple[int, int], ...]) -> Plan:
    """Order the arc actions by strictly decreasing tail distance from the
    root, the root layer (good actions) last; declaration order within a
    layer."""
    heads = [head for _, head in arcs]
    if len(set(heads)) != len(heads):
        raise ContractError("arc set is not a tree: duplicate heads")
    children: Dict[int, List[int]] = {}
    for tail, head in arcs:
        children.setdefault(tail, []).append(head)
    depth = {ROOT: 0}
    queue = [ROOT]
    while queue:
        u = queue.pop()
        for w in children.get(u, ()):
            if w in depth:
                raise ContractError("arc set is not a tree: revisits a node")
            depth[w] = depth[u] + 1
            queue.append(w)
    if len(depth) != len(arcs) + 1:
        raise ContractError("arc set is not a tree rooted at the root node")
    layered = sorted(arcs, key=lambda arc: (-depth[arc[0]],
                                            dst.arc_action[arc]))
    return tuple(dst.arc_action[arc] for arc in layered)


def solve_zero_two(instance: Instance, k: int) -> ZeroTwoResult:
    """The full pipeline.  The transform is skipped when the input already
    has no two-effect good action, keeping the Steiner bound at k."""
    _require_zero_two(instance)
    if k < 0:
        raise ValueError("k must be non-negative")

    transform = None
    work, bound = instance, k
    if _has_two_effect_good_action(instance):
        transform = eliminate_two_effect_good_actions(instance, k)
        work, bound = transform.instance, transform.bound

    dst = build_dst(work, bound)
    solution = dreyfus_wagner(dst)
    if solution is None:
        return ZeroTwoResult(None, transform is not None, dst, None)

    plan = extract_plan(work, dst, solution.arcs)
    report = validate_plan(work, plan)
    if not report.valid:
        raise AssertionError("extracted plan does not validate: "
                             + report.message(work))
    if transform is not None:
        seen: List[int] = []
        for aid in plan:
            orig = transform.source_action.get(aid)
            if orig is not None and orig not in seen:
                seen.append(orig)
        plan = tuple(seen)
        report = validate_plan(instance, plan)
        if not report.valid:
            raise AssertionError("projected plan does not validate: "
                                 + report.message(instance))
    if len(plan) > k:
        raise AssertionError(f"pipeline produced a plan of length {len(plan)}"
                             f" > k={k}")
    return ZeroTwoResult(plan, transform is not None, dst, solution)


def steiner_to_dot(dst: SteinerInstance, instance: Instance) -> str:
    """DOT digraph of the reduction; arc labels name the source action."""
    def node_name(v: int) -> str:
        return "s" if v == ROOT else instance.var_names[v - 1]

    lines = ["digraph steiner {"]
    for v in range(dst.node_count):
        shape = "doublecircle" if v in dst.terminals else (
            "box" if v == ROOT else "circle")
        lines.append(f'  n{v} [label="{node_name(v)}" shape={shape}];')
    for tail, head in dst.arcs:
        label = instance.actions[dst.arc_action[(tail, head)]].name
        lines.append(f'  n{tail} -> n{head} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
