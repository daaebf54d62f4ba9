"""Structural statistics of counterexample queries and corpus aggregates.

Metrics are computed on the canonical atoms of the counterexample matrix.
Two clause counts are reported side by side:

* `clause_count` counts the clauses of the disjunctive presentation of the
  problem's complement (the potential theorem itself, whose negation the
  query is).  For a conjunctive A and H that is |A| plus the hypothesis
  clause(s), and it is the count the corpus-wide aggregate figures are
  checked against.
* `ce_dnf_clause_count` counts the clauses of the direct DNF of the query
  matrix (the decomposition the engine actually distributes over).

Atom counts follow the distinct-canonical-atom reading, and degree,
polynomial, variable, and occurrence metrics are identical under either
presentation since both use the same atom set up to negation.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .formula import Atom, collect_atoms, negate, to_dnf, to_nnf
from .problem import ExistentialQuery

READING_NOTES = (
    "clause_count: disjunctive presentation of the complement of the query; "
    "ce_dnf_clause_count: direct DNF of the query matrix; "
    "atom_count: distinct canonical atoms; "
    "means reported to one decimal, round half up; medians lower-middle"
)


@dataclass(frozen=True)
class OccurrenceMatrix:
    """Variable-by-polynomial 0/1 incidence of a query."""

    variables: tuple[int, ...]       # occurring variable indices, sorted
    polynomials: tuple              # distinct canonical Polynomial, stable order
    entries: tuple[tuple[int, ...], ...]  # rows follow `variables`

    @property
    def ones(self) -> int:
        return sum(sum(row) for row in self.entries)

    @property
    def density(self) -> Fraction:
        cells = len(self.variables) * len(self.polynomials)
        if cells == 0:
            return Fraction(0)
        return Fraction(self.ones, cells)


@dataclass(frozen=True)
class ProblemRow:
    """Per-problem structural metrics."""

    id: str
    clause_count: int
    ce_dnf_clause_count: int
    atom_count: int
    polynomial_count: int
    variable_count: int
    max_total_degree: int
    mean_total_degree: Fraction
    max_per_variable_degree: int
    mean_poly_max_per_variable_degree: Fraction
    polynomials_per_variable: Fraction
    occurrence_ones: int
    occurrence_density: Fraction


CSV_HEADER = [
    "id", "clause_count", "ce_dnf_clause_count", "atom_count",
    "polynomial_count", "variable_count", "max_total_degree",
    "mean_total_degree", "max_per_variable_degree",
    "mean_poly_max_per_variable_degree", "polynomials_per_variable",
    "occurrence_ones", "occurrence_density",
]


def occurrence_matrix(q: ExistentialQuery) -> OccurrenceMatrix:
    """Incidence of occurring variables against distinct canonical polynomials."""
    atoms = collect_atoms(q.matrix)
    polys = []
    seen = set()
    for a in atoms:
        if a.lhs not in seen:
            seen.add(a.lhs)
            polys.append(a.lhs)
    variables = sorted(set().union(*[p.variables() for p in polys]) if polys else set())
    entries = tuple(
        tuple(1 if p.degree_in(v) >= 1 else 0 for p in polys)
        for v in variables
    )
    return OccurrenceMatrix(tuple(variables), tuple(polys), entries)


def analyze_problem(q: ExistentialQuery, problem_id: str = "",
                    max_clauses: int = 100_000) -> ProblemRow:
    """Metrics for one fully existential counterexample query."""
    matrix = to_nnf(q.matrix)
    ce_clauses = len(to_dnf(matrix, max_clauses))
    theorem_clauses = len(to_dnf(negate(matrix), max_clauses))
    atoms = collect_atoms(matrix)
    polys = []
    seen = set()
    for a in atoms:
        if a.lhs not in seen:
            seen.add(a.lhs)
            polys.append(a.lhs)
    occ = occurrence_matrix(q)
    degrees = [p.total_degree() for p in polys]
    per_poly_max_var = [
        max((p.degree_in(v) for v in p.variables()), default=0) for p in polys
    ]
    n_vars = len(occ.variables)
    n_polys = len(polys)
    return ProblemRow(
        id=problem_id,
        clause_count=theorem_clauses,
        ce_dnf_clause_count=ce_clauses,
        atom_count=len(atoms),
        polynomial_count=n_polys,
        variable_count=n_vars,
        max_total_degree=max(degrees, default=0),
        mean_total_degree=Fraction(sum(degrees), n_polys) if n_polys else Fraction(0),
        max_per_variable_degree=max(per_poly_max_var, default=0),
        mean_poly_max_per_variable_degree=(
            Fraction(sum(per_poly_max_var), n_polys) if n_polys else Fraction(0)
        ),
        polynomials_per_variable=Fraction(n_polys, n_vars) if n_vars else Fraction(0),
        occurrence_ones=occ.ones,
        occurrence_density=occ.density,
    )


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def round_half_up(x: Fraction, decimals: int = 1) -> float:
    scale = 10 ** decimals
    return float((x * scale + Fraction(1, 2)).__floor__()) / scale


def _median_lower(values: list) -> Fraction:
    ordered = sorted(values)
    return Fraction(ordered[(len(ordered) - 1) // 2])


@dataclass(frozen=True)
class MetricSummary:
    minimum: Fraction
    maximum: Fraction
    mean: Fraction
    median: Fraction

    @property
    def mean_1dp(self) -> float:
        return round_half_up(self.mean, 1)

    def as_dict(self) -> dict:
        return {
            "min": float(self.minimum),
            "max": float(self.maximum),
            "mean": self.mean_1dp,
            "mean_exact": str(self.mean),
            "median": float(self.median),
        }


AGGREGATED_METRICS = [
    "clause_count", "ce_dnf_clause_count", "atom_count", "polynomial_count",
    "variable_count", "max_total_degree", "mean_total_degree",
    "max_per_variable_degree", "mean_poly_max_per_variable_degree",
    "polynomials_per_variable", "occurrence_density",
]


@dataclass
class StatsReport:
    rows: list[ProblemRow]
    summaries: dict[str, MetricSummary]
    reading_notes: str = READING_NOTES

    @property
    def corpus_max_per_variable_degree(self) -> int:
        return int(max(r.max_per_variable_degree for r in self.rows))

    @property
    def mean_density_2dp(self) -> float:
        return round_half_up(self.summaries["occurrence_density"].mean, 2)


def aggregate(rows: Sequence[ProblemRow]) -> StatsReport:
    """Corpus aggregates: min/max/exact mean/lower-middle median per metric."""
    if not rows:
        raise ValueError("aggregate needs at least one row")
    rows = sorted(rows, key=lambda r: r.id)
    summaries = {}
    for metric in AGGREGATED_METRICS:
        values = [Fraction(getattr(r, metric)) for r in rows]
        summaries[metric] = MetricSummary(
            minimum=min(values),
            maximum=max(values),
            mean=sum(values, Fraction(0)) / len(values),
            median=_median_lower(values),
        )
    return StatsReport(rows=list(rows), summaries=summaries)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def report_to_csv(report: StatsReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow([
            r.id, r.clause_count, r.ce_dnf_clause_count, r.atom_count,
            r.polynomial_count, r.variable_count, r.max_total_degree,
            str(r.mean_total_degree), r.max_per_variable_degree,
            str(r.mean_poly_max_per_variable_degree),
            str(r.polynomials_per_variable),
            r.occurrence_ones, str(r.occurrence_density),
        ])
    return buf.getvalue()


def report_to_json_dict(report: StatsReport) -> dict:
    return {
        "reading_notes": report.reading_notes,
        "problems": [
            {
                **{k: v for k, v in asdict(r).items()
                   if not isinstance(v, Fraction)},
                "mean_total_degree": str(r.mean_total_degree),
                "mean_poly_max_per_variable_degree": str(r.mean_poly_max_per_variable_degree),
                "polynomials_per_variable": str(r.polynomials_per_variable),
                "occurrence_density": str(r.occurrence_density),
            }
            for r in report.rows
        ],
        "aggregates": {k: s.as_dict() for k, s in report.summaries.items()},
        "corpus_max_per_variable_degree": report.corpus_max_per_variable_degree,
        "mean_occurrence_density_2dp": report.mean_density_2dp,
    }
