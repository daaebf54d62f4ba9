"""Model language: parsing, errors, intrinsics, round trips."""

import random
from fractions import Fraction

import pytest

from econqe.dsl import (
    ParseError, formula_to_dsl, parse_formula, parse_problem,
    problem_from_json_dict, problem_to_dsl, problem_to_json_dict,
)
from econqe.formula import Rel, collect_atoms, conj, evaluate_at
from econqe.polynomial import VariableTable

MARSHALL = """
problem "marshall"
vars v1 v2 v3 v4
assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
hypothesis v3 > 0 and v4 < 0
"""


class TestParsing:
    def test_two_atom_assumptions(self):
        p = parse_problem("vars v1 v2\nassume v1 < 0 and v2 > 0\nhypothesis v1*v2 < 0")
        assert len(collect_atoms(p.assumptions)) == 2
        assert len(collect_atoms(p.hypothesis)) == 1

    def test_marshall_shape(self):
        p = parse_problem(MARSHALL)
        assert p.id == "marshall"
        assert p.vars.names == ("v1", "v2", "v3", "v4")
        assert len(collect_atoms(p.assumptions)) == 4
        assert len(collect_atoms(p.hypothesis)) == 2

    def test_dangling_relation_is_syntax_error(self):
        with pytest.raises(ParseError):
            parse_problem("vars v1\nassume v1 <\nhypothesis v1 > 0")

    def test_undeclared_variable(self):
        with pytest.raises(ParseError, match="undeclared"):
            parse_problem("vars v1\nassume v2 > 0\nhypothesis v1 > 0")

    def test_division_by_variable_rejected(self):
        with pytest.raises(ParseError, match="division"):
            parse_problem("vars v1 v2\nassume v1 / v2 > 0\nhypothesis v1 > 0")

    def test_division_by_rational_constant(self):
        p = parse_problem("vars q\nassume q / 2 > 1/2\nhypothesis q > 1")
        a = collect_atoms(p.assumptions)[0]
        assert evaluate_at(a, {0: Fraction(2)})
        assert not evaluate_at(a, {0: Fraction(1)})

    def test_relation_chain_expands(self):
        p = parse_problem("vars a b c\nassume a < b < c\nhypothesis a < c")
        assert len(collect_atoms(p.assumptions)) == 2

    def test_implies_desugars(self):
        p = parse_problem("vars a b\nassume a > 0 implies b > 0\nhypothesis b > 0")
        # not (a>0) or b>0
        assert evaluate_at(p.assumptions, {0: Fraction(-1), 1: Fraction(-1)})
        assert not evaluate_at(p.assumptions, {0: Fraction(1), 1: Fraction(-1)})

    def test_free_and_order_decls(self):
        p = parse_problem(
            "vars a b c\nfree c\norder b a c\nassume a > 0\nhypothesis b > 0"
        )
        assert p.free_vars == frozenset({2})
        assert p.vars.suggested_order == (1, 0, 2)

    def test_parenthesized_formula_vs_polynomial(self):
        p = parse_problem(
            "vars a b\nassume (a > 0 or b > 0) and (a + 1)*(b - 1) = 0\nhypothesis a > 0"
        )
        assert len(collect_atoms(p.assumptions)) == 3

    def test_error_carries_position(self):
        try:
            parse_problem("vars v1\nassume v1 ??\nhypothesis v1 > 0")
        except ParseError as e:
            assert e.line == 2
        else:
            pytest.fail("expected ParseError")

    def test_power(self):
        p = parse_problem("vars x\nassume x^2 - 1 >= 0\nhypothesis x != 0")
        a = collect_atoms(p.assumptions)[0]
        assert a.lhs.total_degree() == 2


class TestIntrinsics:
    def test_gram_psd_expands(self):
        src = (
            "vars p_p p_q q_q\n"
            "assume gram_psd(p, q)\n"
            "hypothesis p_q^2 <= p_p * q_q"
        )
        p = parse_problem(src)
        # 2^2 - 1 = 3 minors
        assert len(collect_atoms(p.assumptions)) == 3

    def test_nsd_minors_expands(self):
        src = (
            "vars f11 f12 f22\n"
            "assume nsd_minors(2, f11, f12, f22)\n"
            "hypothesis f11 <= 0"
        )
        p = parse_problem(src)
        assert len(collect_atoms(p.assumptions)) == 3

    def test_intrinsic_undeclared_vars(self):
        with pytest.raises(ParseError):
            parse_problem("vars a\nassume gram_psd(p, q)\nhypothesis a > 0")


class TestRoundTrip:
    def test_marshall_round_trip(self):
        p = parse_problem(MARSHALL)
        q = parse_problem(problem_to_dsl(p))
        assert q.vars == p.vars
        assert q.assumptions == p.assumptions
        assert q.hypothesis == p.hypothesis
        assert q.free_vars == p.free_vars

    def test_random_formula_round_trips(self):
        rng = random.Random(5)
        table = VariableTable(["x", "y", "z"])
        rels = ["<", "<=", "=", "!=", ">=", ">"]
        for _ in range(200):
            parts = []
            for _ in range(rng.randint(1, 3)):
                lhs = f"{rng.randint(-3, 3)}*x^{rng.randint(0, 2)} + {rng.randint(1, 4)}*y*z"
                parts.append(f"{lhs} {rng.choice(rels)} {rng.randint(-2, 2)}")
            src = (" and " if rng.random() < 0.5 else " or ").join(parts)
            f = parse_formula(src, table)
            g = parse_formula(formula_to_dsl(f, table.names), table)
            assert f == g

    def test_json_round_trip(self):
        p = parse_problem(MARSHALL)
        doc = problem_to_json_dict(p)
        assert doc["id"] == "marshall"
        assert doc["vars"] == ["v1", "v2", "v3", "v4"]
        q = problem_from_json_dict(doc)
        assert q.assumptions == p.assumptions
        assert q.hypothesis == p.hypothesis

    def test_free_vars_round_trip_through_json(self):
        p = parse_problem("vars a b\nfree b\nassume a > 0\nhypothesis b > 0")
        q = problem_from_json_dict(problem_to_json_dict(p))
        assert q.free_vars == frozenset({1})
