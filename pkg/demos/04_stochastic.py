"""Heuristics for a flight that sometimes fails to leave.

The all-outcomes determinization turns every probabilistic branch into its
own action. Heuristics computed on it never exceed the optimal expected cost
from value iteration.
"""
from __future__ import annotations

from absplan import determinize_all_outcomes, h_subgoal, h_widening, vi_optimal_values
from absplan.fixtures import risky_air


def main() -> None:
    problem = risky_air()
    det = determinize_all_outcomes(problem)
    print("determinized actions:", ", ".join(a.name for a in det.actions))
    values = vi_optimal_values(problem, epsilon=1e-10)
    print(f"\n{len(values)} reachable states\n")
    print(f"{'person':10} {'plane':10} {'fuel':>5} {'V*':>7} {'h_wid':>6} {'h_max':>6}")
    for state, v in sorted(values.items(), key=lambda kv: (kv[1], kv[0]["fuel1"])):
        print(f"{state['person1_loc']:10} {state['plane1_loc']:10} {state['fuel1']:>5g} "
              f"{v:>7.4f} {h_widening(det, state):>6} {h_subgoal(det, state):>6}")


if __name__ == "__main__":
    main()
