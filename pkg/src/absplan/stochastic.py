"""Probabilistic actions: all-outcomes determinization, joined-branch abstract steps,
and an exact value-iteration oracle for small stochastic shortest-path problems.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .abssem import finalize_successor, abstract_action
from .concrete import ContractError, StateCapExceeded, applicable, apply, satisfies_goal
from .model import INF, Action, ConcreteState, Expr, Problem


@dataclass(frozen=True)
class ProbAction:
    """Action whose effect is drawn from discrete ``branches`` of (probability, effects)."""

    name: str
    pre: tuple[Expr, ...]
    branches: tuple[tuple[float, tuple[tuple[str, Expr], ...]], ...]

    @property
    def assigned(self) -> frozenset[str]:
        return frozenset(t for _, effects in self.branches for t, _ in effects)

    def branch_action(self, i: int) -> Action:
        """The i-th outcome as a deterministic action (0-based)."""
        name = self.name if len(self.branches) == 1 else f"{self.name}#{i + 1}"
        return Action(name, self.pre, self.branches[i][1])


class ProbProblem(Problem):
    """A Problem whose actions are ProbActions."""


def determinize_all_outcomes(pp: Problem) -> Problem:
    """One deterministic action per branch, named ``name#i`` (1-based) when there are several."""
    actions = []
    for pa in pp.actions:
        if isinstance(pa, ProbAction):
            actions.extend(pa.branch_action(i) for i in range(len(pa.branches)))
        else:
            actions.append(pa)
    return Problem(pp.name, pp.variables, pp.constants, tuple(actions), pp.init, pp.goal,
                   pp.domain, pp.schema)


def _branch_actions(pa: ProbAction) -> list[tuple[float, Action]]:
    return [(p, pa.branch_action(i)) for i, (p, _) in enumerate(pa.branches)]


def outcomes(pa: ProbAction, state: ConcreteState) -> list[tuple[ConcreteState, float]]:
    """(successor, probability) pairs of an applicable probabilistic action, duplicates merged."""
    dist: dict[ConcreteState, float] = {}
    for p, action in _branch_actions(pa):
        nxt = apply(action, state, check=False)
        dist[nxt] = dist.get(nxt, 0.0) + p
    return list(dist.items())


def apply_widened_prob(pa: ProbAction, astate, strategy, iteration: int):
    """Join over branches of the widened application: every outcome happens at once."""
    compiled = abstract_action(pa, astate.schema)
    if astate.is_bottom() or not compiled.possibly_applicable(astate.values):
        raise ContractError(f"action '{pa.name}' is not possibly applicable")
    values = None
    for b in range(len(compiled.branches)):
        out = compiled.widened(astate.values, strategy, iteration, b)
        values = out if values is None else tuple(x.join(y) for x, y in zip(values, out))
    return finalize_successor(astate, pa, values)


def vi_optimal_values(pp: Problem, state_cap: int = 100_000, epsilon: float = 1e-9
                      ) -> dict[ConcreteState, float]:
    """Optimal expected number of steps to the goal for every reachable state.

    Goal states are absorbing with value 0. States with no policy that reaches
    the goal with probability 1 get ``INF``. The remaining values come from
    Gauss-Seidel value iteration started at 0 and stopped once the largest
    update falls below ``epsilon``.
    """
    transitions: dict[ConcreteState, list[list[tuple[ConcreteState, float]]]] = {}
    goals: set[ConcreteState] = set()
    frontier = deque([pp.init])
    transitions[pp.init] = []
    while frontier:
        s = frontier.popleft()
        if satisfies_goal(s, pp):
            goals.add(s)
            continue
        for pa in pp.actions:
            if not applicable(pa if isinstance(pa, Action) else pa.branch_action(0), s):
                continue
            dist = outcomes(pa, s) if isinstance(pa, ProbAction) else _det(pa, s)
            transitions[s].append(dist)
            for t, _ in dist:
                if t not in transitions:
                    transitions[t] = []
                    if len(transitions) > state_cap:
                        raise StateCapExceeded(f"more than {state_cap} states")
                    frontier.append(t)

    # states that can reach the goal with probability 1 under some policy
    proper = set(transitions)
    while True:
        allowed = {s: [d for d in transitions[s] if all(t in proper for t, _ in d)]
                   for s in proper if s not in goals}
        reverse: dict[ConcreteState, set[ConcreteState]] = {}
        for s, dists in allowed.items():
            for d in dists:
                for t, _ in d:
                    reverse.setdefault(t, set()).add(s)
        reach = set(goals)
        queue = deque(goals)
        while queue:
            t = queue.popleft()
            for s in reverse.get(t, ()):
                if s not in reach:
                    reach.add(s)
                    queue.append(s)
        if reach == proper:
            break
        proper = reach

    values = {s: 0.0 for s in proper}
    order = [s for s in transitions if s in proper and s not in goals]
    while True:
        residual = 0.0
        for s in order:
            best = min(1.0 + sum(p * values[t] for t, p in d) for d in allowed[s])
            residual = max(residual, abs(best - values[s]))
            values[s] = best
        if residual < epsilon:
            break
    return {s: values.get(s, INF) for s in transitions}


def _det(action: Action, state: ConcreteState) -> list[tuple[ConcreteState, float]]:
    return [(apply(action, state, check=False), 1.0)]
