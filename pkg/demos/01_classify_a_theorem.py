"""Classify a potential theorem end to end.

Alfred Marshall's classic comparative-statics argument: in any equilibrium
where demand slopes down and supply slopes up, a downward supply shift
raises quantity and lowers price.  With the four derivatives as real
variables (v1 = demand slope, v2 = supply slope, v3 = quantity impact,
v4 = price impact), the claim becomes a small Tarski formula.
"""

from econqe import (
    EngineConfig, build_query_trio, classify_theorem, evaluate_at, parse_problem,
)

SOURCE = """
problem "marshall"
vars v1 v2 v3 v4
assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
hypothesis v3 > 0 and v4 < 0
"""

problem = parse_problem(SOURCE)
print("variables:", ", ".join(problem.vars.names))

# The three existential checks: are the assumptions satisfiable at all,
# is there an example, is there a counterexample?
trio = build_query_trio(problem)
print("counterexample matrix:", trio.counterexample_query.matrix)

result = classify_theorem(problem, EngineConfig(deadline=10.0), engine_mode="builtin")
print("\noutcome:", result.outcome)
for label in ("assumptions", "example", "counterexample"):
    record = getattr(result, label)
    print(f"  {label:15s} {record.verdict.status:8s} "
          f"[{record.engine}, {record.millis:.1f} ms]")

# The example witness is an exact rational point satisfying A and H.
witness = result.example_witness
print("\nexample witness:")
for i, value in sorted(witness.items()):
    print(f"  {problem.vars[i].name} = {value}")
assert evaluate_at(trio.example_query.matrix, witness)
print("witness validates by exact evaluation")
