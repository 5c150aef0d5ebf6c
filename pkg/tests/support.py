"""Test-only helpers: boolean STRIPS tasks and a classic delete-relaxation h_max.

The h_max here works directly on sets of proposition names and shares no code
with the planner, so it can serve as an independent oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from absplan import parse_problem
from absplan.model import INF


@dataclass(frozen=True)
class StripsAction:
    name: str
    pre: frozenset[str]
    add: frozenset[str]
    delete: frozenset[str]


@dataclass(frozen=True)
class StripsTask:
    name: str
    props: tuple[str, ...]
    actions: tuple[StripsAction, ...]
    init: frozenset[str]
    goal: frozenset[str]

    def domain_text(self) -> str:
        lines = [f"(domain {self.name}", "  (variables"]
        lines += [f"    ({p} bool)" for p in self.props]
        lines[-1] += ")"
        for a in self.actions:
            pre = "".join(f" {p}" for p in sorted(a.pre))
            eff = "".join(f" (assign {p} true)" for p in sorted(a.add))
            eff += "".join(f" (assign {p} false)" for p in sorted(a.delete))
            lines.append(f"  (action {a.name} (pre{pre}) (eff{eff}))")
        lines[-1] += ")"
        return "\n".join(lines) + "\n"

    def problem_text(self) -> str:
        init = "".join(f" (assign {p} {'true' if p in self.init else 'false'})" for p in self.props)
        goal = "".join(f" {p}" for p in sorted(self.goal))
        return f"(problem {self.name} (init{init}) (goal{goal}))\n"

    def problem(self):
        return parse_problem(self.domain_text(), self.problem_text())


def classic_hmax(task: StripsTask, true_props: frozenset[str]) -> float:
    """Textbook h_max: Bellman-Ford style fixpoint over proposition costs."""
    cost = {p: (0 if p in true_props else INF) for p in task.props}
    changed = True
    while changed:
        changed = False
        for a in task.actions:
            c = 1 + max((cost[p] for p in a.pre), default=0)
            if c == INF:
                continue
            for p in a.add:
                if c < cost[p]:
                    cost[p] = c
                    changed = True
    return max((cost[p] for p in task.goal), default=0)


def true_props(state) -> frozenset[str]:
    return frozenset(name for name, value in state.items() if value is True)


def _act(name, pre=(), add=(), delete=()):
    return StripsAction(name, frozenset(pre), frozenset(add), frozenset(delete))


def gripper() -> StripsTask:
    props = ("at_ra", "at_rb", "b1_ra", "b1_rb", "b1_held", "b2_ra", "b2_rb", "b2_held", "free")
    acts = [_act("move_ab", ["at_ra"], ["at_rb"], ["at_ra"]),
            _act("move_ba", ["at_rb"], ["at_ra"], ["at_rb"])]
    for b in ("b1", "b2"):
        for r in ("ra", "rb"):
            acts.append(_act(f"pick_{b}_{r}", [f"at_{r}", f"{b}_{r}", "free"],
                             [f"{b}_held"], [f"{b}_{r}", "free"]))
            acts.append(_act(f"drop_{b}_{r}", [f"at_{r}", f"{b}_held"],
                             [f"{b}_{r}", "free"], [f"{b}_held"]))
    return StripsTask("gripper", props, tuple(acts),
                      frozenset({"at_ra", "b1_ra", "b2_ra", "free"}), frozenset({"b1_rb", "b2_rb"}))


def blocks2() -> StripsTask:
    props = ("on_a_b", "on_b_a", "table_a", "table_b", "clear_a", "clear_b",
             "holding_a", "holding_b", "handempty")
    acts = []
    for x, y in (("a", "b"), ("b", "a")):
        acts.append(_act(f"pickup_{x}", [f"table_{x}", f"clear_{x}", "handempty"],
                         [f"holding_{x}"], [f"table_{x}", f"clear_{x}", "handempty"]))
        acts.append(_act(f"putdown_{x}", [f"holding_{x}"],
                         [f"table_{x}", f"clear_{x}", "handempty"], [f"holding_{x}"]))
        acts.append(_act(f"stack_{x}_{y}", [f"holding_{x}", f"clear_{y}"],
                         [f"on_{x}_{y}", f"clear_{x}", "handempty"], [f"holding_{x}", f"clear_{y}"]))
        acts.append(_act(f"unstack_{x}_{y}", [f"on_{x}_{y}", f"clear_{x}", "handempty"],
                         [f"holding_{x}", f"clear_{y}"], [f"on_{x}_{y}", f"clear_{x}", "handempty"]))
    return StripsTask("blocks2", props, tuple(acts),
                      frozenset({"on_a_b", "table_b", "clear_a", "handempty"}), frozenset({"on_b_a"}))


def delivery() -> StripsTask:
    props = ("truck_l1", "truck_l2", "truck_l3", "pkg_l1", "pkg_l2", "pkg_l3", "pkg_in", "fueled")
    acts = [_act("refuel", ["truck_l1"], ["fueled"])]
    locs = ("l1", "l2", "l3")
    for a in locs:
        for b in locs:
            if a != b:
                acts.append(_act(f"drive_{a}_{b}", [f"truck_{a}", "fueled"], [f"truck_{b}"],
                                 [f"truck_{a}"] + (["fueled"] if b == "l3" else [])))
        acts.append(_act(f"load_{a}", [f"truck_{a}", f"pkg_{a}"], ["pkg_in"], [f"pkg_{a}"]))
        acts.append(_act(f"unload_{a}", [f"truck_{a}", "pkg_in"], [f"pkg_{a}"], ["pkg_in"]))
    return StripsTask("delivery", props, tuple(acts),
                      frozenset({"truck_l1", "pkg_l2"}), frozenset({"pkg_l3", "truck_l1"}))


HAND_WRITTEN = (gripper, blocks2, delivery)


def random_strips(rng: random.Random, index: int = 0) -> StripsTask:
    """Small random STRIPS task with add and delete lists kept disjoint."""
    n_props = rng.randint(3, 8)
    props = tuple(f"p{i}" for i in range(n_props))
    actions = []
    for j in range(rng.randint(2, 7)):
        pre = rng.sample(props, rng.randint(0, min(3, n_props)))
        add = rng.sample(props, rng.randint(1, 2))
        rest = [p for p in props if p not in add]
        delete = rng.sample(rest, rng.randint(0, min(2, len(rest))))
        actions.append(_act(f"a{j}", pre, add, delete))
    init = frozenset(p for p in props if rng.random() < 0.4)
    goal = frozenset(rng.sample(props, rng.randint(1, min(3, n_props))))
    return StripsTask(f"rand{index}", props, tuple(actions), init, goal)


# ---------------------------------------------------------------------------
# Random concrete states and abstract states around them
# ---------------------------------------------------------------------------

def random_value(rng: random.Random, vtype):
    from absplan.absdom import SetAbs  # noqa: F401  (keeps import local to fuzz helpers)

    if vtype.kind == "bool":
        return rng.random() < 0.5
    if vtype.kind == "int":
        return rng.randint(-15, 15)
    if vtype.kind == "real":
        return rng.randint(-30, 30) / 2
    if vtype.kind == "finite":
        return rng.choice(vtype.symbols)
    return frozenset(x for x in vtype.symbols if rng.random() < 0.5)


def random_state(rng: random.Random, problem):
    schema = problem.schema
    return schema.state({n: random_value(rng, t) for n, t in zip(schema.names, schema.types)})


def _bound(rng: random.Random, v: float, sign: int, integral: bool) -> float:
    r = rng.random()
    if r < 0.15:
        return sign * INF
    step = rng.randint(0, 6) if integral else rng.randint(0, 12) / 2
    return v + sign * step


def random_abstract_around(rng: random.Random, vtype, value):
    """Random abstract value of ``vtype`` whose concretization contains ``value``."""
    from absplan.absdom import BoolAbs, FiniteAbs, Interval, SetAbs

    if vtype.kind == "bool":
        return BoolAbs(frozenset({value}) | ({not value} if rng.random() < 0.5 else set()))
    if vtype.kind in ("int", "real"):
        integral = vtype.kind == "int"
        return Interval(_bound(rng, value, -1, integral), _bound(rng, value, 1, integral), integral)
    if vtype.kind == "finite":
        extra = {x for x in vtype.symbols if rng.random() < 0.4}
        return FiniteAbs(frozenset({value}) | extra)
    must = frozenset(x for x in value if rng.random() < 0.5)
    may = value | frozenset(x for x in vtype.symbols if rng.random() < 0.5)
    lo = rng.randint(0, len(value))
    hi = rng.randint(len(value), len(vtype.symbols))
    return SetAbs(must, may, Interval(lo, hi, True))


def random_abstract_state(rng: random.Random, problem, state, with_predicates: bool = False):
    from absplan.abssem import AbstractState, predicate_vector

    schema = problem.schema
    values = tuple(random_abstract_around(rng, t, v) for t, v in zip(schema.types, state.values))
    if not with_predicates:
        return AbstractState(schema, values)
    pool = problem.predicate_pool
    return AbstractState(schema, values, predicate_vector(schema, pool, values), pool)


def random_strategy(rng: random.Random, problem):
    from absplan import WideningStrategy, default_thresholds

    thresholds = default_thresholds(problem)
    return rng.choice([
        WideningStrategy.join(),
        WideningStrategy.delayed(rng.randint(0, 3)),
        WideningStrategy.with_thresholds(thresholds),
        WideningStrategy.delayed_thresholds(rng.randint(0, 3), thresholds),
    ])
