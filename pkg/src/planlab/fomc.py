"""Bounded planning as first-order model checking.

An instance is encoded as a finite relational structure; a plan bound k is
encoded as a closed formula whose size depends on k alone.  The general
encoding needs one existential block followed by two universal quantifiers;
for unary instances an extended structure with dummy padding elements makes
a purely existential formula possible.  A generic evaluator then decides
satisfaction, giving a solver route that shares no code with the state-space
oracle or the search-tree solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple

from . import kernels
from .core import (ContractError, Instance, Plan, PlanLabError, classify,
                   diff_set, validate_plan)

SIGMA1_MAX_K = 8  # the diff subset disjunction grows as 2**k


class TriviallyUnsolvable(PlanLabError):
    """A diff set exceeds k, so no plan of length <= k can exist (unary case)."""


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    parts: Tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    part: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    terms: Tuple[str, ...]


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


def node_count(f: Formula) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + node_count(f.body)
    if isinstance(f, (And, Or)):
        return 1 + sum(node_count(p) for p in f.parts)
    if isinstance(f, Not):
        return 1 + node_count(f.part)
    if isinstance(f, Implies):
        return 1 + node_count(f.left) + node_count(f.right)
    return 1


def formula_to_sexpr(f: Formula) -> str:
    if isinstance(f, Exists):
        return f"(exists {f.var} {formula_to_sexpr(f.body)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {formula_to_sexpr(f.body)})"
    if isinstance(f, And):
        return "(and " + " ".join(formula_to_sexpr(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(formula_to_sexpr(p) for p in f.parts) + ")"
    if isinstance(f, Not):
        return f"(not {formula_to_sexpr(f.part)})"
    if isinstance(f, Implies):
        return (f"(implies {formula_to_sexpr(f.left)} "
                f"{formula_to_sexpr(f.right)})")
    if isinstance(f, Atom):
        return "(" + " ".join((f.rel,) + f.terms) + ")"
    if isinstance(f, Equal):
        return f"(= {f.left} {f.right})"
    raise TypeError(f"not a formula node: {f!r}")


def prefix_shape(f: Formula) -> Tuple[int, int, bool]:
    """(existential block length, following universal block length,
    rest quantifier-free)."""
    e = 0
    while isinstance(f, Exists):
        e += 1
        f = f.body
    u = 0
    while isinstance(f, Forall):
        u += 1
        f = f.body
    return e, u, _quantifier_free(f)


def _quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, (And, Or)):
        return all(_quantifier_free(p) for p in f.parts)
    if isinstance(f, Not):
        return _quantifier_free(f.part)
    if isinstance(f, Implies):
        return _quantifier_free(f.left) and _quantifier_free(f.right)
    return True


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------

SORT_VARIABLE = "variable"
SORT_ACTION = "action"
SORT_VALUE = "domain-value"
SORT_DUMMY_ACTION = "dummy-action"
SORT_DUMMY = "dummy-element"


@dataclass(frozen=True)
class RelationalStructure:
    universe: Tuple[Tuple[str, str], ...]  # (display name, sort)
    relations: Dict[str, FrozenSet[Tuple[int, ...]]]
    arities: Dict[str, int]

    @property
    def size(self) -> int:
        return len(self.universe)


@dataclass(frozen=True)
class _Layout:
    """Index arithmetic for instance-derived universes."""
    n: int
    m: int
    d: int

    def var(self, v: int) -> int:
        return v

    def act(self, a: int) -> int:
        return self.n + a

    def val(self, x: int) -> int:
        return self.n + self.m + x

    @property
    def undef(self) -> int:
        return self.n + self.m + self.d

    @property
    def dum_a(self) -> int:
        return self.n + self.m + self.d + 1

    def dummy(self, i: int) -> int:  # i is 1-based
        return self.n + self.m + self.d + 1 + i


def _layout(instance: Instance) -> _Layout:
    return _Layout(instance.var_count, len(instance.actions),
                   instance.domain_size)


def _base_universe(instance: Instance, lay: _Layout):
    universe = [(name, SORT_VARIABLE) for name in instance.var_names]
    universe += [(a.name, SORT_ACTION) for a in instance.actions]
    universe += [(str(x), SORT_VALUE) for x in range(instance.domain_size)]
    universe.append(("u", SORT_VALUE))
    universe.append(("dum_a", SORT_DUMMY_ACTION))
    return universe


def _base_relations(instance: Instance, lay: _Layout):
    rels: Dict[str, set] = {
        "VAR": {(lay.var(v),) for v in range(lay.n)},
        "ACT": {(lay.act(a),) for a in range(lay.m)} | {(lay.dum_a,)},
        "DOM": {(lay.val(x),) for x in range(lay.d)} | {(lay.undef,)},
        "DUM_A": {(lay.dum_a,)},
        "INIT_V": {(lay.var(v), lay.val(x))
                   for v, x in enumerate(instance.init)},
        "GOAL_V": {(lay.var(v), lay.val(x))
                   for v, x in instance.goal.items()},
        "PRE": set(), "EFF": set(), "PRE_V": set(), "EFF_V": set(),
    }
    for a, action in enumerate(instance.actions):
        for v, x in action.pre.items():
            rels["PRE"].add((lay.act(a), lay.var(v)))
            rels["PRE_V"].add((lay.act(a), lay.var(v), lay.val(x)))
        for v, x in action.eff.items():
            rels["EFF"].add((lay.act(a), lay.var(v)))
            rels["EFF_V"].add((lay.act(a), lay.var(v), lay.val(x)))
    return rels


_BASE_ARITIES = {"VAR": 1, "ACT": 1, "DOM": 1, "DUM_A": 1, "INIT_V": 2,
                 "GOAL_V": 2, "PRE": 2, "EFF": 2, "PRE_V": 3, "EFF_V": 3}


def build_structure(instance: Instance) -> RelationalStructure:
    lay = _layout(instance)
    rels = _base_relations(instance, lay)
    return RelationalStructure(
        tuple(_base_universe(instance, lay)),
        {name: frozenset(t) for name, t in rels.items()},
        dict(_BASE_ARITIES))


def build_extended_structure(instance: Instance, k: int) -> RelationalStructure:
    """The base structure plus k dummy elements and the diff relations,
    each action padded to exactly k DIFF_ACT rows."""
    lay = _layout(instance)
    universe = _base_universe(instance, lay)
    universe += [(f"dum{i}", SORT_DUMMY) for i in range(1, k + 1)]
    rels = _base_relations(instance, lay)
    rels["DUM"] = {(lay.dummy(i),) for i in range(1, k + 1)}
    rels["GOAL"] = {(lay.var(v),) for v in instance.goal}
    diff_act = set()
    for a, action in enumerate(instance.actions):
        diff = diff_set(instance, action.pre)
        if len(diff) > k:
            raise TriviallyUnsolvable(
                f"action {action.name!r} deviates from the initial state on "
                f"{len(diff)} > k variables")
        diff_act |= {(lay.act(a), lay.var(v)) for v in diff}
        diff_act |= {(lay.act(a), lay.dummy(i))
                     for i in range(1, k - len(diff) + 1)}
    rels["DIFF_ACT"] = diff_act
    goal_diff = diff_set(instance, instance.goal)
    if len(goal_diff) > k:
        raise TriviallyUnsolvable(
            f"goal deviates from the initial state on {len(goal_diff)} > k "
            "variables")
    rels["DIFF_GOAL"] = ({(lay.var(v),) for v in goal_diff}
                         | {(lay.dummy(i),)
                            for i in range(1, k - len(goal_diff) + 1)})
    arities = dict(_BASE_ARITIES)
    arities.update({"DUM": 1, "GOAL": 1, "DIFF_ACT": 2, "DIFF_GOAL": 1})
    return RelationalStructure(
        tuple(universe),
        {name: frozenset(t) for name, t in rels.items()},
        arities)


def structure_to_text(structure: RelationalStructure) -> str:
    lines = ["universe:"]
    for i, (name, sort) in enumerate(structure.universe):
        lines.append(f"  {i}: {name} [{sort}]")
    for rel in sorted(structure.relations):
        rows = sorted(structure.relations[rel])
        body = " ".join("(" + ",".join(structure.universe[e][0] for e in t) + ")"
                        for t in rows)
        lines.append(f"{rel}: {body}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Formula builders
# ---------------------------------------------------------------------------

def _value_after(i: int, v: str, x: str) -> Formula:
    """v holds x after the first i guessed actions run on the initial state."""
    if i == 0:
        return Atom("INIT_V", (v, x))
    return Or((
        And((_value_after(i - 1, v, x), Not(Atom("EFF", (f"a{i}", v))))),
        Atom("EFF_V", (f"a{i}", v, x)),
    ))


def build_sigma22_formula(k: int) -> Formula:
    """Closed formula: the structure of an instance models it iff a plan of
    length at most k exists.  Prefix: k existentials, two universals."""
    if k < 1:
        raise ValueError("k must be positive")
    check_pre_all = And(tuple(
        Implies(Atom("PRE_V", (f"a{i}", "v", "x")), _value_after(i - 1, "v", "x"))
        for i in range(1, k + 1)))
    check_goal = Implies(Atom("GOAL_V", ("v", "x")), _value_after(k, "v", "x"))
    body: Formula = And(
        tuple(Atom("ACT", (f"a{i}",)) for i in range(1, k + 1))
        + (Implies(And((Atom("VAR", ("v",)), Atom("DOM", ("x",)))),
                   And((check_pre_all, check_goal))),))
    f: Formula = Forall("v", Forall("x", body))
    for i in range(k, 0, -1):
        f = Exists(f"a{i}", f)
    return f


def _subset_cover(target_rel: str, first_term: Optional[str], k: int) -> Formula:
    """The subset disjunction: some set of pairwise-distinct v_j plus leading
    dummies accounts for all of the exactly-k rows of the padded relation."""
    disjuncts = []
    for size in range(k + 1):
        for J in combinations(range(1, k + 1), size):
            parts: List[Formula] = []
            for j, j2 in combinations(J, 2):
                parts.append(Not(Equal(f"v{j}", f"v{j2}")))
            for j in J:
                terms = (f"v{j}",) if first_term is None \
                    else (first_term, f"v{j}")
                parts.append(Atom(target_rel, terms))
            for j in range(1, k - size + 1):
                terms = (f"d{j}",) if first_term is None \
                    else (first_term, f"d{j}")
                parts.append(Atom(target_rel, terms))
            disjuncts.append(And(tuple(parts)) if parts else And(()))
    return Or(tuple(disjuncts))


def build_sigma1_formula(k: int) -> Formula:
    """Closed purely-existential formula over the extended vocabulary,
    equivalent to plan existence for unary instances."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > SIGMA1_MAX_K:
        raise ContractError(
            f"the existential encoding blows up as 2**k; k={k} exceeds the "
            f"cap of {SIGMA1_MAX_K}")

    guards: List[Formula] = []
    guards += [Atom("ACT", (f"a{i}",)) for i in range(1, k + 1)]
    guards += [Atom("VAR", (f"v{i}",)) for i in range(1, k + 1)]
    guards += [Atom("DOM", (f"x{i}_{j}",))
               for i in range(1, k + 1) for j in range(1, k + 1)]
    guards += [Atom("DUM", (f"d{i}",)) for i in range(1, k + 1)]
    guards += [Not(Equal(f"d{i}", f"d{j}"))
               for i, j in combinations(range(1, k + 1), 2)]

    check_eff = And(tuple(
        Or((Atom("EFF", (f"a{i}", f"v{i}")), Atom("DUM_A", (f"a{i}",))))
        for i in range(1, k + 1)))

    diff_op_all = And(tuple(
        Or((Atom("DUM_A", (f"a{i}",)), _subset_cover("DIFF_ACT", f"a{i}", k)))
        for i in range(1, k + 1)))

    diff_goal = _subset_cover("DIFF_GOAL", None, k)

    check_pre_all = And(tuple(
        And(tuple(
            Or((And((Atom("PRE_V", (f"a{i}", f"v{j}", f"x{i}_{j}")),
                     _value_after(i - 1, f"v{j}", f"x{i}_{j}"))),
                Not(Atom("PRE", (f"a{i}", f"v{j}")))))
            for j in range(1, k + 1)))
        for i in range(1, k + 1)))

    check_goal = And(tuple(
        Or((And((Atom("GOAL_V", (f"v{i}", f"xg{i}")),
                 _value_after(k, f"v{i}", f"xg{i}"))),
            Not(Atom("GOAL", (f"v{i}",)))))
        for i in range(1, k + 1)))

    body = And((And(tuple(guards)), check_eff, diff_op_all, diff_goal,
                check_pre_all, check_goal))

    roster = ([f"a{i}" for i in range(1, k + 1)]
              + [f"v{i}" for i in range(1, k + 1)]
              + [f"d{i}" for i in range(1, k + 1)]
              + [f"x{i}_{j}" for i in range(1, k + 1)
                 for j in range(1, k + 1)]
              + [f"xg{i}" for i in range(1, k + 1)])
    f: Formula = body
    for name in reversed(roster):
        f = Exists(name, f)
    return f


# ---------------------------------------------------------------------------
# Compilation to the kernel encoding
# ---------------------------------------------------------------------------

_K = kernels.mc_core


@dataclass
class CompiledQuery:
    kinds: List[int]
    payload: List[object]
    rels: List[object]
    U: int
    n_slots: int
    root: int
    prefix_slots: List[int]
    prefix_names: List[str]
    candidates: List[List[int]]
    const_nodes: List[int]
    sched: List[List[Tuple[int, Tuple[int, ...]]]]


def compile_query(structure: RelationalStructure,
                  formula: Formula) -> CompiledQuery:
    U = structure.size
    rel_ids: Dict[str, int] = {}
    rels: List[object] = []  # bytes bitmap (small key spaces) or frozenset
    packed_keys: List[frozenset] = []
    kinds: List[int] = []
    payload: List[object] = []
    free: List[frozenset] = []  # free slots per node

    scope: Dict[str, List[int]] = {}
    slot_count = 0

    def rel_id(name: str, arity: int) -> int:
        if name not in structure.relations:
            raise ContractError(f"formula uses unknown relation {name!r}")
        if structure.arities[name] != arity:
            raise ContractError(
                f"relation {name} has arity {structure.arities[name]}, "
                f"atom uses {arity}")
        if name not in rel_ids:
            packed = set()
            for t in structure.relations[name]:
                key = 0
                for e in t:
                    key = key * U + e
                packed.add(key)
            rel_ids[name] = len(rels)
            packed_keys.append(frozenset(packed))
            span = U ** arity
            if span <= 1 << 21:
                bitmap = bytearray(span)
                for key in packed:
                    bitmap[key] = 1
                rels.append(bytes(bitmap))
            else:
                rels.append(frozenset(packed))
        return rel_ids[name]

    def slot_of(name: str) -> int:
        if name not in scope or not scope[name]:
            raise ContractError(f"free variable {name!r} in formula")
        return scope[name][-1]

    def emit(kind: int, data, free_slots: frozenset) -> int:
        kinds.append(kind)
        payload.append(data)
        free.append(free_slots)
        return len(kinds) - 1

    def walk(f: Formula) -> int:
        nonlocal slot_count
        if isinstance(f, Atom):
            slots = tuple(slot_of(t) for t in f.terms)
            rid = rel_id(f.rel, len(f.terms))
            kind = _K.ATOM_BM if isinstance(rels[rid], bytes) else _K.ATOM
            return emit(kind, (rid, slots), frozenset(slots))
        if isinstance(f, Equal):
            a, b = slot_of(f.left), slot_of(f.right)
            return emit(_K.EQ, (a, b), frozenset((a, b)))
        if isinstance(f, Not):
            c = walk(f.part)
            return emit(_K.NOT, c, free[c])
        if isinstance(f, And) or isinstance(f, Or):
            children = tuple(walk(p) for p in f.parts)
            fs = frozenset().union(*(free[c] for c in children)) \
                if children else frozenset()
            return emit(_K.AND if isinstance(f, And) else _K.OR, children, fs)
        if isinstance(f, Implies):
            a, b = walk(f.left), walk(f.right)
            return emit(_K.IMPLIES, (a, b), free[a] | free[b])
        if isinstance(f, (Exists, Forall)):
            slot = slot_count
            slot_count += 1
            scope.setdefault(f.var, []).append(slot)
            c = walk(f.body)
            scope[f.var].pop()
            kind = _K.EXISTS if isinstance(f, Exists) else _K.FORALL
            return emit(kind, (slot, c), free[c] - {slot})
        raise TypeError(f"not a formula node: {f!r}")

    root = walk(formula)
    if free[root]:
        raise ContractError("formula is not closed")

    # Outer existential block and its conjunct schedule.
    prefix_slots: List[int] = []
    prefix_names: List[str] = []
    node = root
    f_walk = formula
    while kinds[node] == _K.EXISTS:
        slot, child = payload[node]
        prefix_slots.append(slot)
        prefix_names.append(f_walk.var)
        f_walk = f_walk.body
        node = child

    def conjuncts_of(n: int) -> List[int]:
        if kinds[n] == _K.AND:
            out: List[int] = []
            for c in payload[n]:
                out.extend(conjuncts_of(c))
            return out
        return [n]

    level_of = {slot: i for i, slot in enumerate(prefix_slots)}
    const_nodes: List[int] = []
    sched: List[List[Tuple[int, Tuple[int, ...]]]] = \
        [[] for _ in prefix_slots]
    # A conjunct that is a bare unary atom over one prefix variable acts as
    # a candidate filter for that level instead of a runtime check; this
    # preserves index order and hence the first witness.
    candidates: List[Optional[List[int]]] = [None] * len(prefix_slots)
    for c in conjuncts_of(node):
        levels = tuple(sorted(level_of[s] for s in free[c] if s in level_of))
        if not levels:
            const_nodes.append(c)
            continue
        if kinds[c] in (_K.ATOM, _K.ATOM_BM):
            rid, slots = payload[c]
            if len(slots) == 1 and slots[0] in level_of:
                L = level_of[slots[0]]
                members = sorted(packed_keys[rid])  # unary keys are elements
                if candidates[L] is None:
                    candidates[L] = members
                else:
                    keep = set(members)
                    candidates[L] = [e for e in candidates[L] if e in keep]
                continue
        sched[levels[-1]].append((c, levels))
    cands = [c if c is not None else list(range(U)) for c in candidates]

    return CompiledQuery(kinds, payload, rels, U, slot_count, root,
                         prefix_slots, prefix_names, cands, const_nodes,
                         sched)


def model_check(structure: RelationalStructure, formula: Formula) -> bool:
    sat, _, _ = model_check_witness(structure, formula)
    return sat


def model_check_witness(structure: RelationalStructure, formula: Formula):
    """(satisfied, {prefix var -> universe element index} or None, assignments).

    The witness is the first satisfying assignment of the outer existential
    block when elements are tried in universe index order.
    """
    q = compile_query(structure, formula)
    sat, values, assignments = _K.evaluate_program(
        q.kinds, q.payload, q.rels, q.U, q.n_slots, q.prefix_slots,
        q.candidates, q.const_nodes, q.sched)
    witness = dict(zip(q.prefix_names, values)) if sat else None
    return sat, witness, assignments


def model_check_basic(structure: RelationalStructure, formula: Formula) -> bool:
    """Plain recursive evaluation; reference semantics for parity tests."""
    q = compile_query(structure, formula)
    return _K.evaluate_basic(q.kinds, q.payload, q.rels, q.U, q.n_slots, q.root)


# ---------------------------------------------------------------------------
# The solver route
# ---------------------------------------------------------------------------

SIGMA22 = "sigma22"
SIGMA1 = "sigma1"


@dataclass(frozen=True)
class McResult:
    solvable: bool
    plan: Optional[Plan]
    assignments: int
    fragment: str


def _witness_plan(instance: Instance, witness: Dict[str, int], k: int,
                  action_ids: List[int]) -> Plan:
    lay = _layout(instance)
    plan = []
    for i in range(1, k + 1):
        e = witness[f"a{i}"]
        if e == lay.dum_a:
            continue
        if not lay.n <= e < lay.n + lay.m:
            raise AssertionError("witness bound an action variable to a "
                                 "non-action element")
        plan.append(action_ids[e - lay.n])
    return tuple(plan)


def solve_via_mc(instance: Instance, k: int, fragment: str = SIGMA22) -> McResult:
    """Plan existence at bound k via model checking; the returned witness
    plan is re-validated before being reported."""
    if fragment not in (SIGMA22, SIGMA1):
        raise ValueError(f"unknown fragment {fragment!r}")
    if fragment == SIGMA1 and not classify(instance).unary:
        raise ContractError("the existential fragment requires a unary instance")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        ok = validate_plan(instance, ()).valid
        return McResult(ok, () if ok else None, 0, fragment)

    work = instance
    action_ids = list(range(len(instance.actions)))
    if fragment == SIGMA1:
        if len(diff_set(instance, instance.goal)) > k:
            return McResult(False, None, 0, fragment)
        # An action whose precondition deviates from the initial state on
        # more than k-1 variables can never fire within k unary steps; it is
        # dropped so the padded diff relations stay well-formed.
        action_ids = [a for a in action_ids
                      if len(diff_set(instance,
                                      instance.actions[a].pre)) <= k]
        work = Instance(
            instance.var_count, instance.domain_size,
            tuple(instance.actions[a] for a in action_ids),
            instance.init, dict(instance.goal), instance.var_names)
        structure = build_extended_structure(work, k)
        formula = build_sigma1_formula(k)
    else:
        structure = build_structure(work)
        formula = build_sigma22_formula(k)

    sat, witness, assignments = model_check_witness(structure, formula)
    if not sat:
        return McResult(False, None, assignments, fragment)
    plan = _witness_plan(work, witness, k, action_ids)
    report = validate_plan(instance, plan)
    if not report.valid:
        raise AssertionError(
            "model checking produced a witness that does not validate: "
            + report.message(instance))
    return McResult(True, plan, assignments, fragment)
