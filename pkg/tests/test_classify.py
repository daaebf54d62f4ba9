"""Outcome table semantics and the classification pipeline."""

import itertools
import random
from fractions import Fraction

import pytest

from econqe.classify import (
    ClassificationResult, FreeVariablesError, Outcome, OutcomeKind,
    classify_theorem, interpret_pair, result_to_json_dict,
)
from econqe.dsl import parse_problem
from econqe.encoders import build_query_trio
from econqe.engine import EngineConfig, Verdict, VerdictStatus
from econqe.formula import Rel, atom, conj, evaluate_at, negate, to_nnf
from econqe.polynomial import Polynomial, VariableTable
from econqe.problem import TheoremProblem

CFG = EngineConfig(deadline=20.0)

SAT_ = Verdict(VerdictStatus.SAT)
UNSAT_ = Verdict(VerdictStatus.UNSAT)
UNK_ = Verdict(VerdictStatus.UNKNOWN, reason="timeout")


class TestInterpretPair:
    def test_four_table_cells(self):
        assert interpret_pair(SAT_, UNSAT_).kind is OutcomeKind.THEOREM_TRUE
        assert interpret_pair(SAT_, SAT_).kind is OutcomeKind.MIXED
        assert interpret_pair(UNSAT_, SAT_).kind is OutcomeKind.THEOREM_FALSE
        assert interpret_pair(UNSAT_, UNSAT_).kind is OutcomeKind.CONTRADICTORY_ASSUMPTIONS

    def test_unknown_names_first_undecided_query(self):
        out = interpret_pair(UNK_, UNSAT_)
        assert out.kind is OutcomeKind.UNKNOWN
        assert out.detail == "example: timeout"
        out = interpret_pair(SAT_, UNK_)
        assert out.detail == "counterexample: timeout"

    def test_total_over_status_grid(self):
        verdicts = [SAT_, UNSAT_, UNK_]
        for e, c in itertools.product(verdicts, repeat=2):
            out = interpret_pair(e, c)
            assert isinstance(out, Outcome)
            if e.is_unknown or c.is_unknown:
                assert out.kind is OutcomeKind.UNKNOWN


TOY_TRUE = "vars x\nassume x > 1\nhypothesis x > 0"
TOY_MIXED = "vars x\nassume x > 0\nhypothesis x > 1"
TOY_FALSE = "vars x\nassume x > 0\nhypothesis x < 0"
TOY_CONTRADICTORY = "vars x\nassume x > 0 and x < 0\nhypothesis x > 0"


class TestClassify:
    @pytest.mark.parametrize("src,expected", [
        (TOY_TRUE, OutcomeKind.THEOREM_TRUE),
        (TOY_MIXED, OutcomeKind.MIXED),
        (TOY_FALSE, OutcomeKind.THEOREM_FALSE),
        (TOY_CONTRADICTORY, OutcomeKind.CONTRADICTORY_ASSUMPTIONS),
    ])
    def test_one_toy_problem_per_outcome(self, src, expected):
        r = classify_theorem(parse_problem(src), CFG, engine_mode="builtin")
        assert r.outcome.kind is expected

    def test_short_circuit_on_contradictory_assumptions(self):
        r = classify_theorem(parse_problem(TOY_CONTRADICTORY), CFG, engine_mode="builtin")
        assert r.assumptions is not None
        assert r.example is None
        assert r.counterexample is None

    def test_free_variables_rejected(self):
        p = parse_problem("vars a b\nfree a\nassume a > 0\nhypothesis b > 0")
        with pytest.raises(FreeVariablesError):
            classify_theorem(p, CFG)

    def test_witnesses_validate(self):
        p = parse_problem(TOY_MIXED)
        r = classify_theorem(p, CFG, engine_mode="builtin")
        trio = build_query_trio(p)
        assert r.example_witness is not None
        assert evaluate_at(trio.example_query.matrix, r.example_witness)
        assert r.counterexample_witness is not None
        assert evaluate_at(trio.counterexample_query.matrix, r.counterexample_witness)

    def test_json_document_shape(self):
        p = parse_problem(TOY_TRUE)
        r = classify_theorem(p, CFG, engine_mode="builtin")
        doc = result_to_json_dict(r, p)
        assert doc["outcome"] == "True"
        assert set(doc["queries"]) == {"assumptions", "example", "counterexample"}
        for q in doc["queries"].values():
            assert q["status"] in ("SAT", "UNSAT", "UNKNOWN")
            assert "millis" in q and "engine" in q


class TestNegationDuality:
    def test_duality_on_random_decided_problems(self):
        """Classifying (A, not H) swaps example/counterexample verdicts:
        True <-> False while Mixed and Contradictory stay fixed."""
        rng = random.Random(2718)
        rels = [Rel.LT, Rel.LE, Rel.GE, Rel.GT]
        done = 0
        while done < 200:
            width = rng.randint(1, 2)
            names = [f"x{i}" for i in range(width)]
            vs = [Polynomial.var(width, i) for i in range(width)]

            def rand_f():
                p = Polynomial.constant(width, rng.randint(-2, 2))
                for v in vs:
                    d = rng.choice([0, 1, 1, 2])
                    if d:
                        p = p + v ** d * Polynomial.constant(width, rng.randint(-2, 2))
                return atom(p, rng.choice(rels))

            A = conj([rand_f() for _ in range(rng.randint(1, 2))])
            H = rand_f()
            table = VariableTable(names)
            try:
                p1 = TheoremProblem("p", table, A, H)
                p2 = TheoremProblem("not", table, A, to_nnf(negate(H)))
            except ValueError:
                continue
            cfg = EngineConfig(deadline=5.0, sample_count=8)
            r1 = classify_theorem(p1, cfg, engine_mode="builtin")
            r2 = classify_theorem(p2, cfg, engine_mode="builtin")
            if r1.outcome.kind is OutcomeKind.UNKNOWN or r2.outcome.kind is OutcomeKind.UNKNOWN:
                continue
            dual = {
                OutcomeKind.THEOREM_TRUE: OutcomeKind.THEOREM_FALSE,
                OutcomeKind.THEOREM_FALSE: OutcomeKind.THEOREM_TRUE,
                OutcomeKind.MIXED: OutcomeKind.MIXED,
                OutcomeKind.CONTRADICTORY_ASSUMPTIONS: OutcomeKind.CONTRADICTORY_ASSUMPTIONS,
            }
            assert r2.outcome.kind is dual[r1.outcome.kind]
            done += 1
