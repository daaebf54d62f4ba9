"""Drive external solver processes over SMT-LIB 2 scripts.

Every query can be emitted as a deterministic SMT2 script and decided by
any QF_NRA solver behind a process boundary.  The portfolio runner feeds
lanes sequentially or as a race, validates reported models by exact
evaluation, and never trusts an unvalidated point.  Here the packaged
`econqe-solve` front end plays the external solver, so the demo runs
without any third-party installation; swap in z3 or cvc5 via solvers.ini.
"""

import sys

from econqe import build_query_trio, parse_problem
from econqe.portfolio import SolverSpec, run_portfolio
from econqe.smtlib import emit_redlog, emit_smt2

SOURCE = """
problem "marshall"
vars v1 v2 v3 v4
assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
hypothesis v3 > 0 and v4 < 0
"""

problem = parse_problem(SOURCE)
trio = build_query_trio(problem)

print("=== SMT-LIB 2 script for the counterexample query ===")
print(emit_smt2(trio.counterexample_query))

print("=== same query as computer-algebra input ===")
print(emit_redlog(trio.counterexample_query))

lane = SolverSpec(
    name="econqe-solve",
    command=f"{sys.executable} -m econqe.solver_cli {{file}} --model",
    timeout=30.0,
    expects_model=True,
)
for label, query in (("example", trio.example_query),
                     ("counterexample", trio.counterexample_query)):
    outcome = run_portfolio(query, [lane])
    verdict = outcome.verdict
    print(f"{label}: {verdict.status} via {outcome.winner}")
    if verdict.witness:
        names = problem.vars.names
        print("  model:", {names[i]: str(v) for i, v in sorted(verdict.witness.items())})
