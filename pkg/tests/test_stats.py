"""Structural metrics and aggregation."""

from fractions import Fraction

import pytest

from econqe.dsl import parse_problem
from econqe.encoders import build_query_trio
from econqe.formula import Rel, atom
from econqe.polynomial import Polynomial, VariableTable
from econqe.problem import ExistentialQuery
from econqe.stats import (
    ProblemRow, aggregate, analyze_problem, occurrence_matrix,
    report_to_csv, report_to_json_dict, round_half_up,
)

MARSHALL = """
problem "marshall"
vars v1 v2 v3 v4
assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
hypothesis v3 > 0 and v4 < 0
"""


def marshall_ce():
    p = parse_problem(MARSHALL)
    return build_query_trio(p).counterexample_query


class TestAnalyze:
    def test_marshall_row(self):
        row = analyze_problem(marshall_ce(), "marshall")
        assert row.ce_dnf_clause_count == 2
        assert row.polynomial_count == 6
        assert row.variable_count == 4
        assert row.max_total_degree == 2
        assert row.occurrence_density == Fraction(10, 24)
        # complement presentation: |A| unit clauses plus the hypothesis clause
        assert row.clause_count == 5
        assert row.atom_count == 6

    def test_single_atom_query(self):
        table = VariableTable(["v1"])
        q = ExistentialQuery(table, (0,), atom(Polynomial.var(1, 0), Rel.GT))
        row = analyze_problem(q, "single")
        assert row.ce_dnf_clause_count == 1
        assert row.polynomial_count == 1
        assert row.occurrence_density == 1

    def test_two_variable_product(self):
        table = VariableTable(["v1", "v2"])
        q = ExistentialQuery(
            table, (0, 1),
            atom(Polynomial.var(2, 0) * Polynomial.var(2, 1), Rel.LT),
        )
        m = occurrence_matrix(q)
        assert len(m.variables) == 2
        assert len(m.polynomials) == 1
        assert m.density == 1

    def test_per_variable_at_most_total(self):
        row = analyze_problem(marshall_ce(), "m")
        assert row.max_per_variable_degree <= row.max_total_degree

    def test_density_invariance_under_scaling(self):
        table = VariableTable(["a", "b"])
        A, B = Polynomial.var(2, 0), Polynomial.var(2, 1)
        q1 = ExistentialQuery(table, (0, 1), atom(A * B - 1, Rel.LT))
        q2 = ExistentialQuery(table, (0, 1), atom((A * B - 1).scale(7), Rel.LT))
        assert occurrence_matrix(q1).density == occurrence_matrix(q2).density


class TestAggregate:
    def _rows(self, clause_counts):
        return [
            ProblemRow(
                id=f"{i:04d}", clause_count=c, ce_dnf_clause_count=1,
                atom_count=c, polynomial_count=c, variable_count=4,
                max_total_degree=2, mean_total_degree=Fraction(2),
                max_per_variable_degree=1,
                mean_poly_max_per_variable_degree=Fraction(1),
                polynomials_per_variable=Fraction(c, 4),
                occurrence_ones=4, occurrence_density=Fraction(1, 4),
            )
            for i, c in enumerate(clause_counts)
        ]

    def test_mean_and_lower_median(self):
        report = aggregate(self._rows([2, 4]))
        s = report.summaries["clause_count"]
        assert s.mean_1dp == 3.0
        assert s.median == 2  # lower middle on even counts

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_round_half_up(self):
        assert round_half_up(Fraction(1849, 100), 1) == 18.5
        assert round_half_up(Fraction(1845, 100), 1) == 18.5
        assert round_half_up(Fraction(1844, 100), 1) == 18.4
        assert round_half_up(Fraction(145, 1000), 2) == 0.15

    def test_serialization_shapes(self):
        report = aggregate(self._rows([3, 5, 7]))
        csv_text = report_to_csv(report)
        assert csv_text.splitlines()[0].startswith("id,clause_count")
        assert len(csv_text.splitlines()) == 4
        doc = report_to_json_dict(report)
        assert "aggregates" in doc and "problems" in doc
        assert doc["aggregates"]["clause_count"]["median"] == 5.0
