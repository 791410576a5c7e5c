"""SAS+ data model: instances, plan semantics, restriction classes, effect polarity.

Variables are 0-based indices into a shared finite domain 0..d-1.  A partial
state is a plain mapping var -> value; a variable absent from the mapping is
undefined.  Total states are dense tuples.  Plans are tuples of action ids.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

PartialState = Mapping[int, int]
TotalState = Tuple[int, ...]
Plan = Tuple[int, ...]

NAME_RE = re.compile(r"[A-Za-z0-9_.+-]+\Z")

GOOD = "good"
BAD = "bad"
MIXED = "mixed"


class PlanLabError(Exception):
    pass


class StructuralError(PlanLabError):
    """A corrupt instance or an out-of-range reference into one."""


class ContractError(PlanLabError):
    """An operation was called outside its stated preconditions."""


@dataclass(frozen=True)
class Action:
    name: str
    pre: Dict[int, int]
    eff: Dict[int, int]


@dataclass(frozen=True)
class Instance:
    var_count: int
    domain_size: int
    actions: Tuple[Action, ...]
    init: TotalState
    goal: Dict[int, int]
    # Display names only; not part of structural equality (the text format
    # does not carry them, so round-trips would otherwise not be identities).
    var_names: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n, d = self.var_count, self.domain_size
        if n < 0:
            raise StructuralError("var_count must be non-negative")
        if d < 1:
            raise StructuralError("domain_size must be at least 1")
        if len(self.init) != n:
            raise StructuralError(
                f"init has {len(self.init)} entries, expected {n}")
        for v, x in enumerate(self.init):
            if not 0 <= x < d:
                raise StructuralError(f"init[{v}]={x} outside 0..{d - 1}")
        self._check_partial(self.goal, "goal")
        seen = set()
        for a in self.actions:
            if a.name in seen:
                raise StructuralError(f"duplicate action name {a.name!r}")
            seen.add(a.name)
            self._check_partial(a.pre, f"pre({a.name})")
            self._check_partial(a.eff, f"eff({a.name})")
        if not self.var_names:
            object.__setattr__(
                self, "var_names", tuple(f"v{i}" for i in range(n)))
        if len(self.var_names) != n:
            raise StructuralError("var_names length mismatch")
        if len(set(self.var_names)) != n:
            raise StructuralError("duplicate variable name")

    def _check_partial(self, s: PartialState, where: str) -> None:
        for v, x in s.items():
            if not 0 <= v < self.var_count:
                raise StructuralError(f"{where}: variable {v} out of range")
            if not 0 <= x < self.domain_size:
                raise StructuralError(f"{where}: value {x} out of range")

    def action_id(self, name: str) -> int:
        for i, a in enumerate(self.actions):
            if a.name == name:
                return i
        raise KeyError(name)

    @property
    def action_names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.actions)


@dataclass(frozen=True)
class RestrictionProfile:
    post_unique: bool
    unary: bool
    binary: bool
    single_valued: bool
    max_pre: int
    max_eff: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "P": self.post_unique,
            "U": self.unary,
            "B": self.binary,
            "S": self.single_valued,
            "max_pre": self.max_pre,
            "max_eff": self.max_eff,
        }


@dataclass(frozen=True)
class EffectPolarity:
    effects: Tuple[Tuple[int, str], ...]  # (variable, GOOD|BAD) per effect
    action: str  # GOOD | BAD | MIXED


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    step: Optional[int] = None  # 0-based failing step; None for goal misses
    reason: Optional[str] = None  # "precondition" | "goal"
    variable: Optional[int] = None
    final_state: Optional[TotalState] = None

    def message(self, instance: Instance) -> str:
        if self.valid:
            return "valid"
        vname = instance.var_names[self.variable]
        if self.reason == "precondition":
            return f"precondition {vname} at step {self.step}"
        return f"goal-miss {vname}"


def action_valid_in(state: TotalState, action: Action) -> bool:
    for v, x in action.pre.items():
        if v >= len(state):
            raise StructuralError(f"precondition variable {v} out of range")
        if state[v] != x:
            return False
    return True


def apply_action(state: TotalState, action: Action) -> TotalState:
    if not action.eff:
        return state
    out = list(state)
    for v, x in action.eff.items():
        if v >= len(state):
            raise StructuralError(f"effect variable {v} out of range")
        out[v] = x
    return tuple(out)


def goal_satisfied(state: TotalState, goal: PartialState) -> bool:
    return all(state[v] == x for v, x in goal.items())


def validate_plan(instance: Instance, plan: Plan) -> ValidationReport:
    state = instance.init
    for i, aid in enumerate(plan):
        if not 0 <= aid < len(instance.actions):
            raise StructuralError(f"plan step {i}: action id {aid} out of range")
        action = instance.actions[aid]
        for v, x in sorted(action.pre.items()):
            if state[v] != x:
                return ValidationReport(False, step=i, reason="precondition",
                                        variable=v)
        state = apply_action(state, action)
    for v, x in sorted(instance.goal.items()):
        if state[v] != x:
            return ValidationReport(False, reason="goal", variable=v)
    return ValidationReport(True, final_state=state)


def diff_set(instance: Instance, s: PartialState) -> Tuple[int, ...]:
    """Variables where s is defined and disagrees with the initial state."""
    return tuple(v for v in sorted(s) if s[v] != instance.init[v])


def delta_vars(instance: Instance) -> Tuple[int, ...]:
    return diff_set(instance, instance.goal)


def classify(instance: Instance) -> RestrictionProfile:
    producers: Dict[Tuple[int, int], int] = {}
    post_unique = True
    for a in instance.actions:
        for v, x in a.eff.items():
            producers[(v, x)] = producers.get((v, x), 0) + 1
            if producers[(v, x)] > 1:
                post_unique = False
    unary = all(len(a.eff) == 1 for a in instance.actions)
    binary = instance.domain_size == 2
    prevail: Dict[int, int] = {}
    single_valued = True
    for a in instance.actions:
        for v, x in a.pre.items():
            if v in a.eff:
                continue
            if prevail.setdefault(v, x) != x:
                single_valued = False
    max_pre = max((len(a.pre) for a in instance.actions), default=0)
    max_eff = max((len(a.eff) for a in instance.actions), default=0)
    return RestrictionProfile(post_unique, unary, binary, single_valued,
                              max_pre, max_eff)


def effect_polarity(instance: Instance, action_id: int) -> EffectPolarity:
    action = instance.actions[action_id]
    tags = []
    for v in sorted(action.eff):
        x = action.eff[v]
        goal_x = instance.goal.get(v)
        tags.append((v, GOOD if goal_x is None or goal_x == x else BAD))
    kinds = {t for _, t in tags}
    if kinds == {GOOD} or not kinds:
        overall = GOOD
    elif kinds == {BAD}:
        overall = BAD
    else:
        overall = MIXED
    return EffectPolarity(tuple(tags), overall)


def restrict(instance: Instance, keep: Iterable[int]) -> Instance:
    """Project the instance onto a variable subset, renumbering in index order."""
    kept = sorted(set(keep))
    for v in kept:
        if not 0 <= v < instance.var_count:
            raise StructuralError(f"restrict: variable {v} out of range")
    remap = {v: i for i, v in enumerate(kept)}

    def project(s: PartialState) -> Dict[int, int]:
        return {remap[v]: x for v, x in s.items() if v in remap}

    return Instance(
        var_count=len(kept),
        domain_size=instance.domain_size,
        actions=tuple(Action(a.name, project(a.pre), project(a.eff))
                      for a in instance.actions),
        init=tuple(instance.init[v] for v in kept),
        goal=project(instance.goal),
        var_names=tuple(instance.var_names[v] for v in kept),
    )


def lint_instance(instance: Instance) -> Tuple[str, ...]:
    """Non-fatal oddities: accepted by the parser but worth a warning."""
    warnings = []
    for a in instance.actions:
        if not a.eff:
            warnings.append(f"action {a.name!r} has an empty effect set")
    return tuple(warnings)
