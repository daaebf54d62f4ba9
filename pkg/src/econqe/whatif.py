"""Free-variable analysis: derive side conditions and re-classify."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .encoders import build_query_trio
from .engine import (
    DegreeExceededError, EngineConfig, EngineDeadlineError, VerdictStatus,
    decide_existential, qe_free,
)
from .formula import FALSE, Formula, conj, negate, to_nnf
from .problem import ExistentialQuery, TheoremProblem
from .simplify import simplify


@dataclass
class SideCondition:
    """A quantifier-free condition over the chosen free variables.

    `condition` blocks counterexamples when conjoined into the
    assumptions; `equivalence_checked` is True when the solver confirmed
    both that the condition excludes every counterexample and that its
    complement region is genuinely attainable (or empty).
    """

    condition: Formula
    projection: Formula  # where counterexamples exist, over the free variables
    equivalence_checked: bool
    notes: list[str]


def derive_side_condition(
    p: TheoremProblem,
    free_names: Sequence[str],
    cfg: Optional[EngineConfig] = None,
    solvers: Optional[Sequence] = None,
) -> SideCondition:
    """Quantifier elimination over everything except `free_names`.

    Returns the negation of the counterexample projection, i.e. the
    weakest condition on the free variables that rules counterexamples
    out, verified by UNSAT/SAT checks where the engine can decide them.
    """
    cfg = cfg or EngineConfig()
    free = frozenset(p.vars.by_name(n).index for n in free_names)
    ce = build_query_trio(p).counterexample_query
    block = tuple(i for i in ce.quantified if i not in free)
    projection = qe_free(ExistentialQuery(p.vars, block, ce.matrix), cfg)
    condition = simplify(negate(projection))

    notes: list[str] = []
    all_vars = tuple(range(len(p.vars)))
    blocked = conj([p.assumptions, condition, to_nnf(negate(p.hypothesis))])
    check1 = _decide(ExistentialQuery(p.vars, all_vars, blocked), cfg, solvers)
    ok1 = check1 == VerdictStatus.UNSAT
    if not ok1:
        notes.append(f"counterexample-exclusion check returned {check1}")
    if projection == FALSE:
        ok2 = True
    else:
        reachable = conj([p.assumptions, projection])
        check2 = _decide(ExistentialQuery(p.vars, all_vars, reachable), cfg, solvers)
        ok2 = check2 == VerdictStatus.SAT
        if not ok2:
            notes.append(f"projection-reachability check returned {check2}")
    return SideCondition(
        condition=condition,
        projection=projection,
        equivalence_checked=ok1 and ok2,
        notes=notes,
    )


def _decide(query: ExistentialQuery, cfg: EngineConfig, solvers) -> str:
    verdict = decide_existential(query, cfg)
    if verdict.is_unknown and solvers:
        from .portfolio import run_portfolio

        verdict = run_portfolio(query, list(solvers)).verdict
    return verdict.status


def strengthen(p: TheoremProblem, condition: Formula) -> TheoremProblem:
    """Conjoin a derived condition into the assumptions (fully quantified)."""
    return TheoremProblem(
        id=f"{p.id}+side",
        vars=p.vars,
        assumptions=conj([p.assumptions, condition]),
        hypothesis=p.hypothesis,
        free_vars=frozenset(),
        metadata=dict(p.metadata),
    )
