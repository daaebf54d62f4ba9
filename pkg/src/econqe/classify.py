"""Outcome classification from the trio of existential checks.

The compatibility check runs first; contradictory assumptions short-circuit
the run.  Otherwise the example and counterexample verdicts map onto the
four economic outcomes, with UNKNOWN as an explicit fifth outcome naming
the query that failed to decide.  Real runs time out; honest reporting
beats blocking.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .encoders import build_query_trio
from .engine import EngineConfig, Verdict, VerdictStatus, decide_existential
from .formula import evaluate_at
from .problem import ExistentialQuery, TheoremProblem


class OutcomeKind(enum.Enum):
    THEOREM_TRUE = "True"
    THEOREM_FALSE = "False"
    MIXED = "Mixed"
    CONTRADICTORY_ASSUMPTIONS = "ContradictoryAssumptions"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    detail: Optional[str] = None  # e.g. "example: timeout"

    def __post_init__(self):
        if self.kind is OutcomeKind.UNKNOWN and not self.detail:
            raise ValueError("Unknown outcomes must carry the originating query and reason")

    def __str__(self) -> str:
        if self.detail:
            return f"{self.kind.value}({self.detail})"
        return self.kind.value


class FreeVariablesError(ValueError):
    pass


class InternalInconsistencyError(RuntimeError):
    """Assumptions SAT but both example and counterexample UNSAT."""


@dataclass
class QueryRecord:
    verdict: Verdict
    engine: str  # "builtin" or "external:<name>"
    millis: float


@dataclass
class ClassificationResult:
    problem_id: str
    outcome: Outcome
    assumptions: Optional[QueryRecord] = None
    example: Optional[QueryRecord] = None
    counterexample: Optional[QueryRecord] = None
    warnings: list[str] = field(default_factory=list)

    @property
    def example_witness(self) -> Optional[dict[int, Fraction]]:
        return self.example.verdict.witness if self.example else None

    @property
    def counterexample_witness(self) -> Optional[dict[int, Fraction]]:
        return self.counterexample.verdict.witness if self.counterexample else None


def interpret_pair(example: Verdict, counterexample: Verdict) -> Outcome:
    """Map the (example, counterexample) verdict pair to an outcome.

    (SAT, UNSAT) -> True; (SAT, SAT) -> Mixed; (UNSAT, SAT) -> False;
    (UNSAT, UNSAT) -> ContradictoryAssumptions; any UNKNOWN wins with the
    first undecided query named.
    """
    if example.is_unknown:
        return Outcome(OutcomeKind.UNKNOWN, f"example: {example.reason or 'unknown'}")
    if counterexample.is_unknown:
        return Outcome(OutcomeKind.UNKNOWN, f"counterexample: {counterexample.reason or 'unknown'}")
    if example.is_sat and counterexample.is_unsat:
        return Outcome(OutcomeKind.THEOREM_TRUE)
    if example.is_sat and counterexample.is_sat:
        return Outcome(OutcomeKind.MIXED)
    if example.is_unsat and counterexample.is_sat:
        return Outcome(OutcomeKind.THEOREM_FALSE)
    return Outcome(OutcomeKind.CONTRADICTORY_ASSUMPTIONS)


def _decide_with_escalation(
    query: ExistentialQuery,
    cfg: EngineConfig,
    bridge: Optional[Sequence] = None,
    engine_mode: str = "auto",
    race: bool = False,
) -> QueryRecord:
    start = time.monotonic()
    if engine_mode not in ("auto", "builtin", "external"):
        raise ValueError(f"unknown engine mode {engine_mode!r}")
    if engine_mode in ("auto", "builtin"):
        verdict = decide_existential(query, cfg)
        if not verdict.is_unknown or engine_mode == "builtin" or not bridge:
            return QueryRecord(verdict=verdict, engine="builtin",
                               millis=(time.monotonic() - start) * 1000)
    if not bridge:
        return QueryRecord(
            verdict=Verdict(VerdictStatus.UNKNOWN, reason="no-external-solvers"),
            engine="external", millis=(time.monotonic() - start) * 1000,
        )
    from .portfolio import run_portfolio

    outcome = run_portfolio(query, list(bridge), race=race)
    engine = f"external:{outcome.winner}" if outcome.winner else "external"
    return QueryRecord(verdict=outcome.verdict, engine=engine,
                       millis=(time.monotonic() - start) * 1000)


def classify_theorem(
    p: TheoremProblem,
    cfg: Optional[EngineConfig] = None,
    bridge: Optional[Sequence] = None,
    engine_mode: str = "auto",
) -> ClassificationResult:
    """Run the trio (assumptions first) and classify.

    Classification requires a fully quantified problem; use qe_free for
    free-variable analysis.  The builtin engine runs first, with external
    escalation on UNKNOWN when a bridge is configured.
    """
    if p.free_vars:
        raise FreeVariablesError(
            "classification requires fully quantified queries; "
            f"free variables present: {sorted(p.free_vars)}"
        )
    cfg = cfg or EngineConfig()
    trio = build_query_trio(p)
    result = ClassificationResult(problem_id=p.id, outcome=Outcome(OutcomeKind.UNKNOWN, "pending: not-run"))

    result.assumptions = _decide_with_escalation(trio.assumptions_query, cfg, bridge, engine_mode)
    if result.assumptions.verdict.is_unsat:
        result.outcome = Outcome(OutcomeKind.CONTRADICTORY_ASSUMPTIONS)
        return result

    result.example = _decide_with_escalation(trio.example_query, cfg, bridge, engine_mode)
    result.counterexample = _decide_with_escalation(trio.counterexample_query, cfg, bridge, engine_mode)

    ev, cv = result.example.verdict, result.counterexample.verdict
    if result.assumptions.verdict.is_sat and ev.is_unsat and cv.is_unsat:
        raise InternalInconsistencyError(
            f"problem {p.id}: assumptions SAT but example and counterexample both UNSAT"
        )
    _check_witness(result, trio)
    result.outcome = interpret_pair(ev, cv)
    if result.assumptions.verdict.is_unknown:
        result.warnings.append(
            f"assumptions: {result.assumptions.verdict.reason or 'unknown'}"
        )
    return result


def _check_witness(result: ClassificationResult, trio) -> None:
    for record, query in (
        (result.example, trio.example_query),
        (result.counterexample, trio.counterexample_query),
    ):
        if record and record.verdict.witness is not None:
            if not evaluate_at(query.matrix, record.verdict.witness):
                raise InternalInconsistencyError("reported witness fails validation")


def _witness_json(witness: Optional[dict[int, Fraction]], names: Sequence[str]) -> Optional[dict]:
    if witness is None:
        return None
    return {names[i]: str(v) for i, v in sorted(witness.items())}


def result_to_json_dict(result: ClassificationResult, p: TheoremProblem) -> dict:
    names = p.vars.names
    queries = {}
    for label, record in (
        ("assumptions", result.assumptions),
        ("example", result.example),
        ("counterexample", result.counterexample),
    ):
        if record is None:
            continue
        entry = {
            "status": record.verdict.status,
            "engine": record.engine,
            "millis": round(record.millis, 3),
        }
        w = _witness_json(record.verdict.witness, names)
        if w is not None:
            entry["witness"] = w
        if record.verdict.reason:
            entry["reason"] = record.verdict.reason
        queries[label] = entry
    doc = {
        "id": result.problem_id,
        "outcome": result.outcome.kind.value,
        "queries": queries,
        "warnings": list(result.warnings),
    }
    if result.outcome.detail:
        doc["outcome_detail"] = result.outcome.detail
    return doc
