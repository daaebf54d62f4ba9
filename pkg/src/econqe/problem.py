"""Theorem problems and existential queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .formula import Formula, collect_atoms, formula_variables
from .polynomial import VariableTable


@dataclass(frozen=True)
class TheoremProblem:
    """A named (assumptions, hypothesis) pair over a variable table.

    `free_vars` holds indices left unquantified by the query builders;
    everything else is existentially quantified.  Both formulas are
    quantifier free.
    """

    id: str
    vars: VariableTable
    assumptions: Formula
    hypothesis: Formula
    free_vars: frozenset[int] = frozenset()
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        bad = [i for i in self.free_vars if not 0 <= i < len(self.vars)]
        if bad:
            raise ValueError(f"free variable indices out of range: {bad}")

    def quantified_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.vars)) if i not in self.free_vars)


@dataclass(frozen=True)
class ExistentialQuery:
    """Prenex existential block over a quantifier-free matrix.

    The block is an ordered list of variable indices; a query is "fully
    existential" when the block covers every variable occurring in the
    matrix.
    """

    vars: VariableTable
    quantified: tuple[int, ...]
    matrix: Formula

    def __post_init__(self):
        if len(set(self.quantified)) != len(self.quantified):
            raise ValueError("prenex block repeats a variable")
        bad = [i for i in self.quantified if not 0 <= i < len(self.vars)]
        if bad:
            raise ValueError(f"quantified indices out of range: {bad}")

    def free_indices(self) -> frozenset[int]:
        return formula_variables(self.matrix) - frozenset(self.quantified)

    def is_fully_existential(self) -> bool:
        return not self.free_indices()

    def prune_block(self) -> "ExistentialQuery":
        """Drop quantified variables that do not occur in the matrix."""
        occurring = formula_variables(self.matrix)
        kept = tuple(i for i in self.quantified if i in occurring)
        if kept == self.quantified:
            return self
        return ExistentialQuery(self.vars, kept, self.matrix)
