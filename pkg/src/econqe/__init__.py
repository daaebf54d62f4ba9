"""econqe: theorem classification for economic reasoning over the reals.

Given assumptions A and hypothesis H as Boolean combinations of polynomial
sign conditions, the package builds the trio of existential checks
(compatibility of A, example A and H, counterexample A and not-H), decides
them with a built-in virtual-substitution engine or an external solver
portfolio, classifies the result as True / Mixed / False / Contradictory
Assumptions, performs limited quantifier elimination over chosen free
variables to derive side conditions, and analyzes the structural shape of
problem corpora.
"""

from .polynomial import Polynomial, Variable, VariableTable, rational
from .formula import (
    Atom, And, Or, Not, Rel, Formula, TRUE, FALSE,
    atom, conj, disj, negate, to_nnf, to_dnf, dnf_to_formula,
    evaluate_at, formula_metrics, collect_atoms, formula_variables,
    DnfBlowupError, MissingAssignmentError,
)
from .problem import TheoremProblem, ExistentialQuery
from .dsl import (
    ParseError, parse_problem, parse_formula,
    problem_to_dsl, formula_to_dsl, problem_to_json, problem_to_json_dict,
    problem_from_json_dict,
)
from .encoders import (
    DotProductMap, HessianSymbols, QueryTrio,
    build_query_trio, gram_psd_constraints, nsd_minor_hypothesis,
)
from .engine import (
    EngineConfig, Verdict, VerdictStatus,
    witness_search, decide_existential, qe_free,
    vs_eliminate_var, choose_elimination_order, distribute_exists_over_dnf,
    DegreeExceededError,
)
from .classify import (
    Outcome, OutcomeKind, ClassificationResult,
    interpret_pair, classify_theorem, result_to_json_dict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
