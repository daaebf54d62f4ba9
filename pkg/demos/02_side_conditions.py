"""Derive a side condition that turns a Mixed result into a theorem.

The scenario-analysis model 0013 asks: if labour-supply taxes are the main
driver of a recession, do wages rise?  Classification says Mixed: both
examples and counterexamples exist.  Freeing the two slope variables and
eliminating everything else recovers the condition under which the
hypothesis is guaranteed, which can then be conjoined into the assumptions
and re-classified.
"""

from pathlib import Path

from econqe import EngineConfig, classify_theorem, formula_to_dsl, parse_problem
from econqe.whatif import derive_side_condition, strengthen

MODEL = Path(__file__).parent.parent / "src" / "econqe" / "data" / "models" / "0013.econ"

problem = parse_problem(MODEL.read_text(), default_id="0013")
cfg = EngineConfig(deadline=60.0)

result = classify_theorem(problem, cfg, engine_mode="builtin")
print("original outcome:", result.outcome)

# Leave the two slope variables free; eliminate the other ten.
side = derive_side_condition(problem, ["Dw", "Sw"], cfg)
print("\nwhere counterexamples live:",
      formula_to_dsl(side.projection, problem.vars.names))
print("derived condition:", formula_to_dsl(side.condition, problem.vars.names))
print("equivalence checked:", side.equivalence_checked)

# Conjoin the condition into the assumptions and classify again.
stronger = strengthen(problem, side.condition)
result2 = classify_theorem(stronger, cfg, engine_mode="builtin")
print("\nstrengthened outcome:", result2.outcome)
