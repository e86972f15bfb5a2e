"""How much each controller cares about knowing the plant.

Every run below multiplies all five plant parameters by a common factor
while the controllers keep the tuning (and, for the flat ones, the
internal model) they were given for the nominal plant.  The adaptive iP
loop re-estimates its lumped disturbance every tick, so its tracking
barely moves across a 4x parameter range; the PI degrades gracefully;
the feedforward controllers inherit whatever their frozen model gets
wrong.
"""

from dataclasses import replace
from pathlib import Path

from heatloop import (
    FlatPController,
    FlatPiController,
    IpController,
    PiController,
    default_scenario,
    sweep,
)
from heatloop.engine import DEFAULT_SWEEP_FACTORS

OUT = Path(__file__).parent / "output"


def main() -> None:
    base = default_scenario()
    controllers = {
        "ip": IpController(),
        "pi": PiController(),
        "flat_p": FlatPController(model=base.plant),
        "flat_pi": FlatPiController(model=base.plant),
    }

    print("rmse (K) with all plant parameters scaled, tuning held fixed")
    print()
    header = "  ".join(f"x{f:<6}" for f in DEFAULT_SWEEP_FACTORS)
    print(f"{'controller':<12}  {header}")
    for name, ctrl in controllers.items():
        rows = sweep(replace(base, controller=ctrl))
        cells = "  ".join(f"{m.rmse:<7.4f}" for _, m in rows)
        print(f"{name:<12}  {cells}")

    print()
    print("the iP row is the flat one: its worst case across the whole")
    print("range stays within a tenth of the comfort band")


if __name__ == "__main__":
    main()
