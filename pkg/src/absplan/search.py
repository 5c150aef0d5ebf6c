"""Best-first forward search (A*, greedy best-first, uniform-cost) over concrete states."""
from __future__ import annotations

import heapq
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial
from typing import Union

from .absdom import WideningStrategy
from .concrete import compile_action, satisfies_goal
from .heur import h_goal_count, h_subgoal, h_widening
from .model import INF, ConcreteState, Problem

HEURISTICS = ("hmax-widen", "hmax", "hadd", "goal-count", "zero")
ALGORITHMS = ("astar", "gbfs", "ucs")

Heuristic = Callable[[ConcreteState], float]


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class SearchParams:
    algorithm: str = "astar"
    heuristic: Union[str, Heuristic] = "hmax-widen"
    node_cap: int = 1_000_000
    widening: WideningStrategy | None = None
    max_layers: int = 1000
    seed: int | None = None  # reserved

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown search algorithm {self.algorithm!r}")
        if isinstance(self.heuristic, str) and self.heuristic not in HEURISTICS:
            raise ConfigurationError(f"unknown heuristic {self.heuristic!r} "
                                     f"(choose from {', '.join(HEURISTICS)})")
        if self.node_cap < 1:
            raise ConfigurationError("node cap must be >= 1")


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_generated: int = 0
    heuristic_evals: int = 0
    peak_open_size: int = 0
    wall_time_ms: float = 0.0


@dataclass
class SearchResult:
    status: str  # solved | unsolvable | cap_exceeded
    plan: list[str] = field(default_factory=list)
    cost: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)


def make_heuristic(problem: Problem, name: str, widening: WideningStrategy | None = None,
                   max_layers: int = 1000) -> Heuristic:
    """Heuristic function for one of the names in HEURISTICS."""
    if name == "hmax-widen":
        return partial(_call_widen, problem, widening, max_layers)
    if name == "hmax":
        return partial(_call_subgoal, problem, "max", widening, max_layers)
    if name == "hadd":
        return partial(_call_subgoal, problem, "sum", widening, max_layers)
    if name == "goal-count":
        return partial(h_goal_count, problem)
    if name == "zero":
        return lambda state: 0
    raise ConfigurationError(f"unknown heuristic {name!r}")


def _call_widen(problem, widening, max_layers, state):
    return h_widening(problem, state, widening, max_layers)


def _call_subgoal(problem, aggregator, widening, max_layers, state):
    return h_subgoal(problem, state, aggregator, widening, max_layers)


def plan_search(problem: Problem, params: SearchParams | None = None) -> SearchResult:
    """Search from the initial state for a plan.

    Ordering keys: A* uses (g+h, insertion order), greedy best-first
    (h, g, insertion order), uniform-cost (g, insertion order). Insertion order
    follows action declaration order, so runs are deterministic. States with
    h = INF are never queued. A* and UCS reopen states reached more cheaply.
    """
    params = params or SearchParams()
    if callable(params.heuristic):
        h_fn = params.heuristic
    elif params.algorithm == "ucs":
        h_fn = lambda state: 0  # noqa: E731
    else:
        h_fn = make_heuristic(problem, params.heuristic, params.widening, params.max_layers)

    stats = SearchStats()
    memo: dict[ConcreteState, float] = {}

    def h(state: ConcreteState) -> float:
        value = memo.get(state)
        if value is None:
            value = h_fn(state)
            memo[state] = value
            stats.heuristic_evals += 1
        return value

    t0 = time.perf_counter()
    result = _best_first(problem, params, h, stats)
    stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    result.stats = stats
    return result


def _key(algorithm: str, g: int, h: float, tie: int) -> tuple:
    if algorithm == "astar":
        return (g + h, tie)
    if algorithm == "gbfs":
        return (h, g, tie)
    return (g, tie)


def _best_first(problem: Problem, params: SearchParams, h, stats: SearchStats) -> SearchResult:
    algorithm = params.algorithm
    schema = problem.schema
    compiled = [compile_action(a, schema) for a in problem.actions]
    names = [a.name for a in problem.actions]
    reopen = algorithm != "gbfs"

    root = problem.init
    stats.nodes_generated = 1
    h0 = h(root)
    if h0 == INF:
        return SearchResult("unsolvable")
    best_g: dict[ConcreteState, int] = {root: 0}
    parent: dict[ConcreteState, tuple[ConcreteState, str] | None] = {root: None}
    closed: set[ConcreteState] = set()
    tie = 0
    open_list = [(_key(algorithm, 0, h0, tie), 0, root)]
    stats.peak_open_size = 1

    while open_list:
        _, g, state = heapq.heappop(open_list)
        if g > best_g[state] or state in closed:
            continue
        closed.add(state)
        if satisfies_goal(state, problem):
            return SearchResult("solved", _extract(parent, state), g)
        stats.nodes_expanded += 1
        values = state.values
        for ca, name in zip(compiled, names):
            if not ca.applicable(values):
                continue
            child = ConcreteState(schema, ca.apply(values))
            stats.nodes_generated += 1
            if stats.nodes_generated > params.node_cap:
                return SearchResult("cap_exceeded")
            g2 = g + 1
            known = best_g.get(child)
            if known is not None and (g2 >= known or not reopen):
                continue
            hc = h(child)
            if hc == INF:
                continue
            best_g[child] = g2
            parent[child] = (state, name)
            closed.discard(child)
            tie += 1
            heapq.heappush(open_list, (_key(algorithm, g2, hc, tie), g2, child))
            if len(open_list) > stats.peak_open_size:
                stats.peak_open_size = len(open_list)
    return SearchResult("unsolvable")


def _extract(parent, state: ConcreteState) -> list[str]:
    plan = []
    link = parent[state]
    while link is not None:
        state, name = link
        plan.append(name)
        link = parent[state]
    plan.reverse()
    return plan
