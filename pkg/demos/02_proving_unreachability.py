"""Use the widening fixpoint to show that some goals can never be reached.

Fuel only ever decreases, so asking for more than 200 units is hopeless; a
counter that only counts up never goes negative. Widening with thresholds
reaches a fixpoint in a handful of layers, while plain join keeps climbing
one step at a time and runs into the layer cap.
"""
from __future__ import annotations

from absplan import LayerCapExceeded, WideningStrategy, h_widening, prove_unreachable
from absplan.fixtures import air1_fuel, monotone_negative


def show(title: str, problem, strategy=None) -> None:
    result = prove_unreachable(problem, strategy)
    print(f"== {title} ({'unreachable' if result.unreachable else 'possibly reachable'})")
    print(result.trace.dump())


def main() -> None:
    show("air travel, goal fuel1 > 200, default widening", air1_fuel())
    show("air travel, goal fuel1 > 200, thresholds {0, 10, 200}", air1_fuel(),
         WideningStrategy.delayed_thresholds(2, (0, 10, 200)))
    show("monotone counter, goal c < 0", monotone_negative())

    try:
        h_widening(monotone_negative(), strategy=WideningStrategy.join(), max_layers=200)
    except LayerCapExceeded as err:
        print("plain join on the counter:", err)


if __name__ == "__main__":
    main()
