"""Heuristics derived from abstract interpretation of the problem.

``h_widening`` counts merged widening layers until the goal may hold,
``h_subgoal`` propagates per-predicate achievement costs through widened
effects (max aggregation gives an h_max generalization, sum an h_add one).
Both return ``INF`` when the abstract fixpoint proves the goal unreachable.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .absdom import (
    WideningStrategy,
    alpha_value,
    compile_abs,
    default_strategy,
    possibly_true,
    widen,
)
from .abssem import AbstractState, abstract_action, affected_indices
from .concrete import compile_expr
from .model import INF, ConcreteState, Problem


class LayerCapExceeded(RuntimeError):
    """The layer/round budget ran out before a goal layer or a fixpoint.

    Under a terminating widening strategy this never happens; seeing it means
    the configuration (e.g. plain join on an unbounded counter) diverges.
    """


@dataclass
class ReachabilityTrace:
    """Layer-by-layer record of one widening reachability run."""

    problem: Problem
    layers: list[tuple] = field(default_factory=list)
    first_true: list[int | None] = field(default_factory=list)
    goal_layer: int | None = None
    fixpoint_layer: int | None = None

    def state(self, k: int) -> AbstractState:
        return AbstractState(self.problem.schema, self.layers[k])

    def dump(self) -> str:
        """Line-oriented debugging dump; the format is informal and may change."""
        names = self.problem.schema.names
        pool = self.problem.predicate_pool
        lines = []
        for k, layer in enumerate(self.layers):
            if k == 0:
                changed = [f"{n}={v!r}" for n, v in zip(names, layer)]
            else:
                prev = self.layers[k - 1]
                changed = [f"{n}={v!r}" for n, v, w in zip(names, layer, prev) if v != w]
            new = [str(pool[i]) for i, first in enumerate(self.first_true) if first == k]
            lines.append(f"layer {k}: changed {'; '.join(changed) or '-'}")
            lines.append(f"layer {k}: newly possible {'; '.join(new) or '-'}")
        if self.goal_layer is not None:
            lines.append(f"goal possible at layer {self.goal_layer}")
        if self.fixpoint_layer is not None:
            lines.append(f"fixpoint at layer {self.fixpoint_layer}")
        return "\n".join(lines) + "\n"


def _strategy(problem: Problem, strategy: WideningStrategy | None) -> WideningStrategy:
    return default_strategy(problem) if strategy is None else strategy


def reachability(problem: Problem, state: ConcreteState | None = None,
                 strategy: WideningStrategy | None = None, max_layers: int = 1000,
                 record: bool = False) -> tuple[float, ReachabilityTrace | None]:
    """Widening reachability from ``state``: (layer count or INF, optional trace).

    Layer k+1 joins layer k with the widened effect of every action that may
    apply in layer k. The value is the first layer where every goal conjunct
    may hold; INF if the layers reach a fixpoint first.
    """
    if max_layers < 1:
        raise ValueError("max_layers must be >= 1")
    strategy = _strategy(problem, strategy)
    state = problem.init if state is None else state
    schema = state.schema
    values = tuple(alpha_value(v) for v in state.values)
    goal = [compile_abs(g, schema) for g in problem.goal]
    actions = [abstract_action(a, schema) for a in problem.actions]
    trace = ReachabilityTrace(problem) if record else None
    pool_fns = [compile_abs(p, schema) for p in problem.predicate_pool] if record else []
    if record:
        trace.first_true = [None] * len(pool_fns)

    k = 0
    while True:
        if record:
            trace.layers.append(values)
            for i, f in enumerate(pool_fns):
                if trace.first_true[i] is None and possibly_true(f(values)):
                    trace.first_true[i] = k
        if all(True in g(values).values for g in goal):
            if record:
                trace.goal_layer = k
            return k, trace
        if k >= max_layers:
            raise LayerCapExceeded(f"no goal layer or fixpoint within {max_layers} layers "
                                   f"(widening {strategy})")
        nxt = list(values)
        for act in actions:
            if not act.possibly_applicable(values):
                continue
            for branch in act.branches:
                for i, f in branch:
                    nxt[i] = nxt[i].join(widen(values[i], f(values), strategy, k + 1))
        nxt = tuple(nxt)
        if nxt == values:
            if record:
                trace.fixpoint_layer = k
            return INF, trace
        values = nxt
        k += 1


def h_widening(problem: Problem, state: ConcreteState | None = None,
               strategy: WideningStrategy | None = None, max_layers: int = 1000) -> float:
    """Number of merged widening layers until the goal may hold (INF at a goal-free fixpoint)."""
    return reachability(problem, state, strategy, max_layers)[0]


_AGGREGATORS: dict[str, Callable[[Sequence[float]], float]] = {
    "max": lambda xs: max(xs, default=0),
    "sum": lambda xs: sum(xs),
}


def h_subgoal(problem: Problem, state: ConcreteState | None = None, aggregator: str = "max",
              strategy: WideningStrategy | None = None, max_rounds: int = 1000) -> float:
    """Generalized subgoaling heuristic over the predicate pool.

    Every pooled predicate gets a cost: 0 if it holds in ``state``, otherwise
    the cheapest ``1 + aggregate(pre-costs)`` over actions whose own abstract
    effect can make it true. Actions are enabled once all their precondition
    conjuncts have finite cost; their widened effects accumulate in a global
    abstract state that supplies the values of unassigned variables. Rounds
    are Jacobi-style (updates visible next round) and run until neither the
    cost table nor the abstract state changes. ``aggregator`` is ``"max"``
    (admissible) or ``"sum"`` (more informative, not admissible).
    """
    if aggregator not in _AGGREGATORS:
        raise ValueError(f"aggregator must be 'max' or 'sum', not {aggregator!r}")
    agg = _AGGREGATORS[aggregator]
    strategy = _strategy(problem, strategy)
    state = problem.init if state is None else state
    schema = state.schema
    pool = problem.predicate_pool
    index = {p: i for i, p in enumerate(pool)}
    goal_idx = [index[g] for g in problem.goal]

    cost = [0 if compile_expr(p, schema)(state.values) else INF for p in pool]
    if all(cost[i] == 0 for i in goal_idx):
        return 0
    pool_fns = [compile_abs(p, schema) for p in pool]
    plans = []
    for a in problem.actions:
        plans.append((abstract_action(a, schema), [index[c] for c in a.pre],
                      affected_indices(a, schema, pool)))
    values = tuple(alpha_value(v) for v in state.values)
    for rnd in range(1, max_rounds + 1):
        new_cost = list(cost)
        nxt = list(values)
        for act, pre_idx, affected in plans:
            pre_costs = [cost[j] for j in pre_idx]
            if INF in pre_costs:
                continue
            c_a = 1 + agg(pre_costs)
            for branch in act.branches:
                effect = [(i, f(values)) for i, f in branch]
                local = list(values)
                for i, v in effect:
                    local[i] = v
                    nxt[i] = nxt[i].join(widen(values[i], v, strategy, rnd))
                local = tuple(local)
                for q in affected:
                    if c_a < new_cost[q] and possibly_true(pool_fns[q](local)):
                        new_cost[q] = c_a
        nxt = tuple(nxt)
        if nxt == values and new_cost == cost:
            return agg([cost[i] for i in goal_idx])
        values, cost = nxt, new_cost
    raise LayerCapExceeded(f"subgoal costs did not stabilize within {max_rounds} rounds "
                           f"(widening {strategy})")


@dataclass(frozen=True)
class UnreachabilityResult:
    unreachable: bool
    value: float
    trace: ReachabilityTrace


def prove_unreachable(problem: Problem, strategy: WideningStrategy | None = None,
                      max_layers: int = 1000) -> UnreachabilityResult:
    """Try to show that no plan exists: true iff the widening fixpoint excludes the goal."""
    value, trace = reachability(problem, None, strategy, max_layers, record=True)
    return UnreachabilityResult(value == INF, value, trace)


def h_zero(state: ConcreteState | None = None) -> int:
    return 0


def h_goal_count(problem: Problem, state: ConcreteState | None = None) -> int:
    """Number of goal conjuncts false in ``state`` (not admissible in general)."""
    state = problem.init if state is None else state
    return sum(1 for g in problem.goal if not compile_expr(g, state.schema)(state.values))
