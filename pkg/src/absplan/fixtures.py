"""Ready-made domains used by the tests, the demos and the documentation.

``AIR1`` is the single-passenger air-travel problem: one person, one plane,
two cities, a fuel budget and a set of passengers on board. Its initial state
and goal are fixture choices (person and plane start in city1; the plane must
reach city2 with the person on board), not part of the domain itself.
"""
from __future__ import annotations

from .frontend import parse_problem
from .model import Problem

AIR1_DOMAIN = """\
(domain air1
  (constants
    (burn_rate real 10))
  (variables
    (person1_loc (finite city1_loc city2_loc plane1_id))
    (plane1_loc (finite city1_loc city2_loc))
    (fuel1 real)
    (onboard1 (set-of person1_id)))
  (action board_person1_plane1_city1
    (pre (= person1_loc city1_loc) (= plane1_loc city1_loc))
    (eff (assign person1_loc plane1_id)
         (assign onboard1 (add-elem onboard1 person1_id))))
  (action fly_city1_city2
    (pre (= plane1_loc city1_loc) (> fuel1 (* burn_rate (cardinality onboard1))))
    (eff (assign plane1_loc city2_loc)
         (assign fuel1 (- fuel1 (* burn_rate (cardinality onboard1)))))))
"""

# fixture choice: initial state and goal
AIR1_PROBLEM = """\
(problem air1
  (init
    (assign person1_loc city1_loc)
    (assign plane1_loc city1_loc)
    (assign fuel1 100)
    (assign onboard1 (set)))
  (goal (and (= plane1_loc city2_loc) (member person1_id onboard1))))
"""

AIR1_FUEL_PROBLEM = """\
(problem air1_fuel
  (init
    (assign person1_loc city1_loc)
    (assign plane1_loc city1_loc)
    (assign fuel1 100)
    (assign onboard1 (set)))
  (goal (> fuel1 200)))
"""

AIR1_PLANE_PROBLEM = """\
(problem air1_plane
  (init
    (assign person1_loc city1_loc)
    (assign plane1_loc city1_loc)
    (assign fuel1 100)
    (assign onboard1 (set)))
  (goal (= plane1_loc city2_loc)))
"""


def air1() -> Problem:
    return parse_problem(AIR1_DOMAIN, AIR1_PROBLEM, "air1.dom", "air1.prob")


def air1_fuel() -> Problem:
    """AIR1 with the goal ``fuel1 > 200``: unsolvable, since fuel only decreases."""
    return parse_problem(AIR1_DOMAIN, AIR1_FUEL_PROBLEM, "air1.dom", "air1_fuel.prob")


def air1_plane() -> Problem:
    return parse_problem(AIR1_DOMAIN, AIR1_PLANE_PROBLEM, "air1.dom", "air1_plane.prob")


def air_domain_text(people: int, cities: int, name: str | None = None) -> str:
    """One plane, ``people`` passengers, ``cities`` cities; board, debark and fly everywhere."""
    name = name or f"air_{people}p_{cities}c"
    city = [f"city{j}_loc" for j in range(1, cities + 1)]
    pid = [f"person{i}_id" for i in range(1, people + 1)]
    lines = [f"(domain {name}", "  (constants", "    (burn_rate real 10))", "  (variables"]
    for i in range(1, people + 1):
        lines.append(f"    (person{i}_loc (finite {' '.join(city)} plane1_id))")
    lines.append(f"    (plane1_loc (finite {' '.join(city)}))")
    lines.append("    (fuel1 real)")
    lines.append(f"    (onboard1 (set-of {' '.join(pid)})))")
    for i in range(1, people + 1):
        for c in city:
            cname = c[:-4]
            lines += [
                f"  (action board_person{i}_plane1_{cname}",
                f"    (pre (= person{i}_loc {c}) (= plane1_loc {c}))",
                f"    (eff (assign person{i}_loc plane1_id)"
                f" (assign onboard1 (add-elem onboard1 person{i}_id))))",
                f"  (action debark_person{i}_plane1_{cname}",
                f"    (pre (= person{i}_loc plane1_id) (= plane1_loc {c}))",
                f"    (eff (assign person{i}_loc {c})"
                f" (assign onboard1 (remove-elem onboard1 person{i}_id))))",
            ]
    for a in city:
        for b in city:
            if a == b:
                continue
            lines += [
                f"  (action fly_{a[:-4]}_{b[:-4]}",
                f"    (pre (= plane1_loc {a}) (> fuel1 (* burn_rate (cardinality onboard1))))",
                f"    (eff (assign plane1_loc {b})"
                f" (assign fuel1 (- fuel1 (* burn_rate (cardinality onboard1))))))",
            ]
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def air_problem_text(people: int, cities: int, start: list[int], dest: list[int],
                     fuel: int = 100, name: str | None = None) -> str:
    """Person i starts in city ``start[i]`` and must end in city ``dest[i]`` (1-based)."""
    name = name or f"air_{people}p_{cities}c"
    lines = [f"(problem {name}", "  (init"]
    for i in range(people):
        lines.append(f"    (assign person{i + 1}_loc city{start[i]}_loc)")
    lines += ["    (assign plane1_loc city1_loc)", f"    (assign fuel1 {fuel})",
              "    (assign onboard1 (set)))"]
    goal = " ".join(f"(= person{i + 1}_loc city{dest[i]}_loc)" for i in range(people))
    lines.append(f"  (goal {goal}))")
    return "\n".join(lines) + "\n"


def air(people: int, cities: int, start: list[int] | None = None,
        dest: list[int] | None = None, fuel: int = 100) -> Problem:
    """Multi-passenger air problem; by default person i starts in city i and flies one city on."""
    start = start or [(i % cities) + 1 for i in range(people)]
    dest = dest or [((s) % cities) + 1 for s in start]
    return parse_problem(air_domain_text(people, cities),
                         air_problem_text(people, cities, start, dest, fuel))


def air_2p_3c() -> Problem:
    """The 2-person / 3-city instance used to compare search effort."""
    return air(2, 3, start=[1, 2], dest=[3, 1])


COUNTER_DOMAIN = """\
(domain bounded_counter
  (variables (c int) (flag bool))
  (action inc (pre (< c 6)) (eff (assign c (+ c 1))))
  (action dec (pre (> c 0)) (eff (assign c (- c 1))))
  (action double (pre (> c 0) (<= c 3)) (eff (assign c (* c 2))))
  (action mark (pre (>= c 5)) (eff (assign flag true))))
"""

COUNTER_PROBLEM = """\
(problem bounded_counter
  (init (assign c 0) (assign flag false))
  (goal flag (= c 2)))
"""

MONOTONE_DOMAIN = """\
(domain monotone_counter
  (variables (c int))
  (action inc (eff (assign c (+ c 1)))))
"""

MONOTONE_NEGATIVE_PROBLEM = """\
(problem monotone_negative
  (init (assign c 0))
  (goal (< c 0)))
"""

MONOTONE_TARGET_PROBLEM = """\
(problem monotone_target
  (init (assign c 0))
  (goal (>= c 4)))
"""


def bounded_counter() -> Problem:
    return parse_problem(COUNTER_DOMAIN, COUNTER_PROBLEM)


def monotone_negative() -> Problem:
    """Unboundedly increasing counter with the unreachable goal ``c < 0``."""
    return parse_problem(MONOTONE_DOMAIN, MONOTONE_NEGATIVE_PROBLEM)


def monotone_target() -> Problem:
    return parse_problem(MONOTONE_DOMAIN, MONOTONE_TARGET_PROBLEM)


SET_DOMAIN = """\
(domain bags
  (variables
    (bag (set-of red green blue))
    (shelf (set-of red green blue))
    (picked (finite red green blue)))
  (action pick_red (pre (member red shelf)) (eff (assign picked red)))
  (action pick_green (pre (member green shelf)) (eff (assign picked green)))
  (action pick_blue (pre (member blue shelf)) (eff (assign picked blue)))
  (action stow
    (pre (member picked shelf) (< (cardinality bag) 2))
    (eff (assign bag (add-elem bag picked)) (assign shelf (remove-elem shelf picked))))
  (action unstow_red
    (pre (member red bag))
    (eff (assign bag (remove-elem bag red)) (assign shelf (add-elem shelf red)))))
"""

SET_PROBLEM = """\
(problem bags
  (init
    (assign bag (set red))
    (assign shelf (set green blue))
    (assign picked green))
  (goal (member blue bag) (subset (set green) bag)))
"""

SET_IMPOSSIBLE_PROBLEM = """\
(problem bags_full
  (init
    (assign bag (set))
    (assign shelf (set red green blue))
    (assign picked red))
  (goal (= (cardinality bag) 3)))
"""


def bags() -> Problem:
    return parse_problem(SET_DOMAIN, SET_PROBLEM)


def bags_full() -> Problem:
    """The bag holds at most two items, so the goal is unsolvable."""
    return parse_problem(SET_DOMAIN, SET_IMPOSSIBLE_PROBLEM)


def deterministic_suite() -> dict[str, Problem]:
    """Every deterministic fixture, keyed by a short name."""
    return {
        "air1": air1(),
        "air1_fuel": air1_fuel(),
        "air1_plane": air1_plane(),
        "air_2p_2c": air(2, 2),
        "air_2p_3c": air_2p_3c(),
        "air_1p_3c": air(1, 3, start=[1], dest=[3]),
        "bounded_counter": bounded_counter(),
        "monotone_target": monotone_target(),
        "bags": bags(),
        "bags_full": bags_full(),
    }


RISKY_AIR_DOMAIN = """\
(probdomain risky_air
  (constants
    (burn_rate real 10))
  (variables
    (person1_loc (finite city1_loc city2_loc plane1_id))
    (plane1_loc (finite city1_loc city2_loc))
    (fuel1 real)
    (onboard1 (set-of person1_id)))
  (action board_person1_plane1_city1
    (pre (= person1_loc city1_loc) (= plane1_loc city1_loc))
    (branches
      (1 (assign person1_loc plane1_id) (assign onboard1 (add-elem onboard1 person1_id)))))
  (action fly_risky
    (pre (= plane1_loc city1_loc) (> fuel1 (* burn_rate (cardinality onboard1))))
    (branches
      (0.9 (assign plane1_loc city2_loc)
           (assign fuel1 (- fuel1 (* burn_rate (cardinality onboard1)))))
      (0.1 (assign fuel1 (- fuel1 (* burn_rate (cardinality onboard1)))))))
  (action refuel
    (pre (= plane1_loc city1_loc) (< fuel1 50))
    (branches
      (1 (assign fuel1 100)))))
"""

SLIPPERY_DOMAIN = """\
(probdomain slippery
  (variables (c int) (bonus bool))
  (action step
    (pre (< c 4))
    (branches (0.5 (assign c (+ c 1))) (0.5)))
  (action leap
    (pre (< c 3))
    (branches (0.6 (assign c (+ c 2))) (0.4 (assign c 0))))
  (action collect
    (pre (= c 2))
    (branches (0.8 (assign bonus true)) (0.2 (assign c 1)))))
"""

SLIPPERY_PROBLEM = """\
(problem slippery
  (init (assign c 0) (assign bonus false))
  (goal (>= c 4) bonus))
"""


def risky_air() -> Problem:
    return parse_problem(RISKY_AIR_DOMAIN, AIR1_PROBLEM)


def slippery() -> Problem:
    return parse_problem(SLIPPERY_DOMAIN, SLIPPERY_PROBLEM)


def stochastic_suite() -> dict[str, Problem]:
    return {"risky_air": risky_air(), "slippery": slippery()}
