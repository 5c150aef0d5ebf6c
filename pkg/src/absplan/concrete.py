"""Concrete semantics: evaluation, applicability, parallel-assignment successors, plan checking.

Expressions are compiled once into closures over the state's value tuple and
cached on the problem schema, so the search hot loop never walks the AST.
"""
from __future__ import annotations

import operator
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .model import (
    INF,
    Action,
    Call,
    ConcreteState,
    Expr,
    Lit,
    Problem,
    Ref,
    Schema,
    Value,
)

Evaluator = Callable[[tuple], Value]


class ContractError(ValueError):
    """A caller broke an operation's precondition (e.g. applied an inapplicable action)."""


class StateCapExceeded(RuntimeError):
    """Exhaustive enumeration generated more states than allowed."""


class UnknownActionError(KeyError):
    pass


_BINARY = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "add-elem": lambda s, x: s | {x},
    "remove-elem": lambda s, x: s - {x},
    "member": lambda x, s: x in s,
    "subset": operator.le,
}


def _build(expr: Expr, schema: Schema) -> Evaluator:
    if isinstance(expr, Lit):
        value = expr.value
        return lambda v: value
    if isinstance(expr, Ref):
        i = schema.index.get(expr.name)
        if i is None:
            value = schema.constants[expr.name].value
            return lambda v: value
        return operator.itemgetter(i)
    args = [_build(a, schema) for a in expr.args]
    fn = expr.fn
    if fn == "and":
        return lambda v: all(f(v) for f in args)
    if fn == "or":
        return lambda v: any(f(v) for f in args)
    if fn == "not":
        (a,) = args
        return lambda v: not a(v)
    if fn == "cardinality":
        (a,) = args
        return lambda v: len(a(v))
    op = _BINARY[fn]
    a, b = args
    return lambda v: op(a(v), b(v))


def compile_expr(expr: Expr, schema: Schema) -> Evaluator:
    key = ("c", id(expr))
    hit = schema.cache.get(key)
    if hit is not None and hit[0] is expr:
        return hit[1]
    fn = _build(expr, schema)
    schema.cache[key] = (expr, fn)
    return fn


class CompiledAction:
    __slots__ = ("action", "pre", "effects")

    def __init__(self, action: Action, schema: Schema):
        self.action = action
        self.pre = tuple(compile_expr(p, schema) for p in action.pre)
        effects = []
        for target, rhs in action.effects:
            i = schema.index[target]
            f = compile_expr(rhs, schema)
            if schema.types[i].kind == "real" and rhs.type.kind == "int":
                f = (lambda g: lambda v: float(g(v)))(f)
            effects.append((i, f))
        self.effects = tuple(effects)

    def applicable(self, values: tuple) -> bool:
        for p in self.pre:
            if not p(values):
                return False
        return True

    def apply(self, values: tuple) -> tuple:
        out = list(values)
        for i, f in self.effects:
            out[i] = f(values)
        return tuple(out)


def compile_action(action: Action, schema: Schema) -> CompiledAction:
    key = ("a", id(action))
    hit = schema.cache.get(key)
    if hit is not None and hit[0] is action:
        return hit[1]
    compiled = CompiledAction(action, schema)
    schema.cache[key] = (action, compiled)
    return compiled


def eval_expr(expr: Expr, state: ConcreteState) -> Value:
    """Value of ``expr`` in ``state`` (strict, side-effect free)."""
    return compile_expr(expr, state.schema)(state.values)


def applicable(action: Action, state: ConcreteState) -> bool:
    return compile_action(action, state.schema).applicable(state.values)


def apply(action: Action, state: ConcreteState, check: bool = True) -> ConcreteState:
    """Successor of ``state`` under ``action``.

    All right-hand sides read the input state; assignments then happen
    simultaneously. Applying an inapplicable action raises ContractError.
    """
    compiled = compile_action(action, state.schema)
    if check and not compiled.applicable(state.values):
        raise ContractError(f"action '{action.name}' is not applicable")
    return ConcreteState(state.schema, compiled.apply(state.values))


def successors(problem: Problem, state: ConcreteState) -> list[tuple[Action, ConcreteState]]:
    """Applicable actions and their successors, in declaration order."""
    schema = state.schema
    out = []
    for action in problem.actions:
        compiled = compile_action(action, schema)
        if compiled.applicable(state.values):
            out.append((action, ConcreteState(schema, compiled.apply(state.values))))
    return out


def satisfies_goal(state: ConcreteState, problem: Problem) -> bool:
    schema = state.schema
    return all(compile_expr(g, schema)(state.values) for g in problem.goal)


@dataclass(frozen=True)
class PlanValidation:
    valid: bool
    cost: int
    failure_index: int | str | None = None
    final_state: ConcreteState | None = None


def validate_plan(problem: Problem, plan: Sequence[str]) -> PlanValidation:
    """Replay ``plan`` from the initial state.

    ``failure_index`` is the 0-based index of the first inapplicable step, or
    ``"goal"`` when every step applies but the goal does not hold at the end.
    Unknown action names raise UnknownActionError before anything is replayed.
    """
    by_name = {a.name: a for a in problem.actions}
    unknown = [n for n in plan if n not in by_name]
    if unknown:
        raise UnknownActionError(f"unknown action(s): {', '.join(unknown)}")
    state = problem.init
    for step, name in enumerate(plan):
        action = by_name[name]
        if not applicable(action, state):
            return PlanValidation(False, step, step, state)
        state = apply(action, state, check=False)
    if not satisfies_goal(state, problem):
        return PlanValidation(False, len(plan), "goal", state)
    return PlanValidation(True, len(plan), None, state)


def optimal_cost_oracle(problem: Problem, state: ConcreteState | None = None,
                        state_cap: int = 100_000) -> float:
    """Exact optimal plan length from ``state`` by breadth-first search.

    Returns ``INF`` when the finite reachable component holds no goal state;
    raises StateCapExceeded when more than ``state_cap`` states are generated.
    """
    start = problem.init if state is None else state
    if satisfies_goal(start, problem):
        return 0
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        current, depth = frontier.popleft()
        for _, nxt in successors(problem, current):
            if nxt in seen:
                continue
            if satisfies_goal(nxt, problem):
                return depth + 1
            seen.add(nxt)
            if len(seen) > state_cap:
                raise StateCapExceeded(f"more than {state_cap} states")
            frontier.append((nxt, depth + 1))
    return INF


def reachable_graph(problem: Problem, state_cap: int = 100_000,
                    start: ConcreteState | None = None
                    ) -> dict[ConcreteState, list[ConcreteState]]:
    """Adjacency lists of every state reachable from ``start`` (default: init)."""
    start = problem.init if start is None else start
    graph: dict[ConcreteState, list[ConcreteState]] = {}
    frontier = deque([start])
    graph[start] = []
    while frontier:
        current = frontier.popleft()
        succ = [nxt for _, nxt in successors(problem, current)]
        graph[current] = succ
        for nxt in succ:
            if nxt not in graph:
                graph[nxt] = []
                if len(graph) > state_cap:
                    raise StateCapExceeded(f"more than {state_cap} states")
                frontier.append(nxt)
    return graph


def optimal_cost_table(problem: Problem, state_cap: int = 100_000) -> dict[ConcreteState, float]:
    """Optimal cost-to-goal for every reachable state (backward BFS over the explicit graph)."""
    graph = reachable_graph(problem, state_cap)
    reverse: dict[ConcreteState, list[ConcreteState]] = {s: [] for s in graph}
    for s, succ in graph.items():
        for t in succ:
            reverse[t].append(s)
    cost: dict[ConcreteState, float] = {}
    frontier = deque()
    for s in graph:
        if satisfies_goal(s, problem):
            cost[s] = 0
            frontier.append(s)
    while frontier:
        t = frontier.popleft()
        for s in reverse[t]:
            if s not in cost:
                cost[s] = cost[t] + 1
                frontier.append(s)
    return {s: cost.get(s, INF) for s in graph}


def replay(problem: Problem, plan: Iterable[str]) -> ConcreteState:
    state = problem.init
    for name in plan:
        state = apply(problem.action(name), state)
    return state
