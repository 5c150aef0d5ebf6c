"""Walk through the one-passenger air-travel problem.

Run with ``python demos/01_air_travel.py``.
"""
from __future__ import annotations

from absplan import (
    SearchParams,
    WideningStrategy,
    alpha_state,
    apply_widened,
    h_subgoal,
    h_widening,
    optimal_cost_oracle,
    plan_search,
)
from absplan.fixtures import air1


def main() -> None:
    problem = air1()
    print(f"problem {problem.name}: {len(problem.variables)} variables, "
          f"{len(problem.actions)} actions, {len(problem.predicate_pool)} pooled predicates")
    for i, pred in enumerate(problem.predicate_pool):
        print(f"  P[{i}] {pred}")

    # One widened step of each action from the initial state. Values only grow,
    # so the predicate vector can only gain entries.
    start = alpha_state(problem, problem.init, with_predicates=True)
    print("\ninitial abstract state:", start)
    print("  predicates possibly true:", start.preds)
    for action in problem.actions:
        after = apply_widened(action, start, WideningStrategy.join(), 1)
        print(f"after widened {action.name}:")
        print("  ", after)
        print("   predicates possibly true:", after.preds)

    print("\nheuristic values at the initial state")
    print("  h_widening        =", h_widening(problem))
    print("  h_subgoal (max)   =", h_subgoal(problem, aggregator="max"))
    print("  h_subgoal (sum)   =", h_subgoal(problem, aggregator="sum"))
    print("  optimal plan cost =", optimal_cost_oracle(problem))

    result = plan_search(problem, SearchParams("astar", "hmax-widen"))
    print(f"\nA* with h_widening: {result.status}, cost {result.cost}")
    for step, name in enumerate(result.plan):
        print(f"  {step}: {name}")
    print(f"  expanded {result.stats.nodes_expanded}, generated {result.stats.nodes_generated}")


if __name__ == "__main__":
    main()
