"""Dimension-free encodings: Gram matrices and Hessian minors.

Vector problems with an unspecified dimension reduce to constraints on
dot products: realizability over the reals is exactly positive
semidefiniteness of the Gram matrix, encoded through all principal
minors.  Concavity hypotheses become alternating-sign minor conditions on
a symbolic Hessian.  Both are available as DSL intrinsics.
"""

from econqe import (
    EngineConfig, classify_theorem, collect_atoms, parse_problem,
)

# The vector-summary model: a compensated price change cannot positively
# correlate with the quantity change, whatever the number of goods.
HICKS = """
problem "hicks"
vars q_q q_qh q_p q_ph qh_qh qh_p qh_ph p_p p_ph ph_ph
assume gram_psd(q, qh, p, ph) and q_p <= qh_p and qh_ph <= q_ph
hypothesis qh_ph - qh_p - q_ph + q_p <= 0
"""

problem = parse_problem(HICKS)
print("gram_psd(q, qh, p, ph) expands to",
      len(collect_atoms(problem.assumptions)) - 2, "minor atoms")
result = classify_theorem(problem, EngineConfig(deadline=30.0), engine_mode="builtin")
print("outcome:", result.outcome)

# Negative semidefiniteness of a 2x2 Hessian through nsd_minors.
CONCAVE = """
problem "concave-2"
vars f11 f12 f22
assume f11 < 0 and f11*f22 - f12^2 > 0
hypothesis nsd_minors(2, f11, f12, f22)
"""
problem2 = parse_problem(CONCAVE)
print("\nnsd_minors(2, ...) expands to",
      len(collect_atoms(problem2.hypothesis)), "atoms")
result2 = classify_theorem(problem2, EngineConfig(deadline=30.0), engine_mode="builtin")
print("outcome:", result2.outcome)
