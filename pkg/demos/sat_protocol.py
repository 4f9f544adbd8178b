"""Deciding satisfiability by letting false rows cancel.

Every assignment is checked in parallel; REMOVE-F turns each F into a
cancelling pair and an extra I keeps the collection observable.

    python3 demos/sat_protocol.py
"""

from lambdaq import Rng
from lambdaq.sat import And, Not, Or, Prop, pipeline_distribution, sat_observe

v1, v2, v3 = Prop(1), Prop(2), Prop(3)
formulas = {
    "v1 & !v1": And(v1, Not(v1)),
    "v1": v1,
    "v1 & v2 & v3": And(v1, And(v2, v3)),
    "(v1 | v2) & !v3": And(Or(v1, v2), Not(v3)),
}

rng = Rng(11)
for name, f in formulas.items():
    law = pipeline_distribution(f)
    print(f"{name:<18} law: {law.serialize().strip().replace(chr(10), '; ')}")
    print(f"{'':<18} 5 trials: {sat_observe(f, rng=rng, trials=5).value}")
