"""Reusable encoding patterns for dimension-free economic models.

Two families of generated constraints:

* Gram-matrix positive semidefiniteness.  A symmetric matrix of dot-product
  variables is realizable by actual real vectors exactly when it is PSD,
  and PSD for a symmetric matrix is equivalent to every principal minor
  being nonnegative.  Leading minors alone do not characterize
  semidefiniteness, so all 2^k - 1 subsets are used.

* Negative semidefiniteness of a symbolic Hessian, encoded through the
  alternating sign pattern on principal minors: odd orders <= 0, even
  orders >= 0.

Determinants are expanded symbolically by cofactors; with the practical
dimension caps (k <= 6, n <= 4) this stays cheap and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .formula import Formula, Rel, atom, conj, to_nnf, negate
from .polynomial import Polynomial, Variable, VariableTable
from .problem import ExistentialQuery, TheoremProblem


def _pair_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


@dataclass(frozen=True)
class DotProductMap:
    """Variables standing for the pairwise dot products of k abstract vectors."""

    vectors: tuple[str, ...]
    grid: Mapping[tuple[int, int], Variable]

    def __post_init__(self):
        k = len(self.vectors)
        expected = {(i, j) for i in range(k) for j in range(i, k)}
        if set(self.grid.keys()) != expected:
            raise ValueError(f"grid must cover exactly the {k * (k + 1) // 2} unordered pairs")

    @property
    def k(self) -> int:
        return len(self.vectors)

    def dot(self, i: int, j: int) -> Variable:
        return self.grid[_pair_key(i, j)]

    @staticmethod
    def variable_name(a: str, b: str) -> str:
        return f"{a}_{b}"

    @classmethod
    def from_table(cls, vectors: Sequence[str], table: VariableTable) -> "DotProductMap":
        """Look up dot-product variables named `<a>_<b>` (declared order, i <= j)."""
        vectors = tuple(vectors)
        grid = {}
        for i in range(len(vectors)):
            for j in range(i, len(vectors)):
                grid[(i, j)] = table.by_name(cls.variable_name(vectors[i], vectors[j]))
        return cls(vectors, grid)


@dataclass(frozen=True)
class HessianSymbols:
    """Variables standing for the entries of a symmetric n x n Hessian."""

    n: int
    grid: Mapping[tuple[int, int], Variable]

    def __post_init__(self):
        expected = {(i, j) for i in range(self.n) for j in range(i, self.n)}
        if set(self.grid.keys()) != expected:
            raise ValueError(f"grid must cover exactly the {self.n * (self.n + 1) // 2} unordered pairs")

    def entry(self, i: int, j: int) -> Variable:
        return self.grid[_pair_key(i, j)]

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[Variable]) -> "HessianSymbols":
        """Entries listed row-major over the upper triangle: (1,1),(1,2),...,(n,n)."""
        if len(entries) != n * (n + 1) // 2:
            raise ValueError(f"expected {n * (n + 1) // 2} entries, got {len(entries)}")
        grid = {}
        it = iter(entries)
        for i in range(n):
            for j in range(i, n):
                grid[(i, j)] = next(it)
        return cls(n, grid)


def symbolic_determinant(entries: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Cofactor expansion along the first row."""
    m = len(entries)
    if m == 1:
        return entries[0][0]
    width = entries[0][0].width
    total = Polynomial.zero(width)
    for col in range(m):
        minor = [[row[c] for c in range(m) if c != col] for row in entries[1:]]
        cofactor = entries[0][col] * symbolic_determinant(minor)
        total = total + (cofactor if col % 2 == 0 else -cofactor)
    return total


def _principal_minor(width: int, lookup, subset: Sequence[int]) -> Polynomial:
    entries = [
        [Polynomial.var(width, lookup(i, j).index) for j in subset]
        for i in subset
    ]
    return symbolic_determinant(entries)


def gram_psd_constraints(k: int, dp: DotProductMap, width: int) -> Formula:
    """All principal minors of the symbolic Gram matrix are >= 0.

    Yields 2^k - 1 atoms before canonical merging; the 2x2 minors are the
    Cauchy-Schwarz inequalities.
    """
    if not 1 <= k <= 6:
        raise ValueError(f"vector count {k} outside the supported range 1..6")
    if k != dp.k:
        raise ValueError(f"map covers {dp.k} vectors, not {k}")
    atoms = []
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            atoms.append(atom(_principal_minor(width, dp.dot, subset), Rel.GE))
    return conj(atoms)


def nsd_minor_hypothesis(n: int, hs: HessianSymbols, width: int) -> Formula:
    """Alternating principal-minor signs: (-1)^|S| det(M[S,S]) >= 0.

    Characterizes negative semidefiniteness of the symmetric matrix;
    2^n - 1 atoms before merging.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"dimension {n} outside the supported range 1..4")
    if n != hs.n:
        raise ValueError(f"symbols cover dimension {hs.n}, not {n}")
    atoms = []
    for size in range(1, n + 1):
        sign = -1 if size % 2 else 1
        for subset in combinations(range(n), size):
            minor = _principal_minor(width, hs.entry, subset)
            atoms.append(atom(minor if sign > 0 else -minor, Rel.GE))
    return conj(atoms)


@dataclass(frozen=True)
class QueryTrio:
    """The three existential checks of one potential theorem.

    Matrices are A, A and H, A and nnf(not H); all three share the variable
    table and quantify exactly the non-free variables.
    """

    assumptions_query: ExistentialQuery
    example_query: ExistentialQuery
    counterexample_query: ExistentialQuery


def build_query_trio(p: TheoremProblem) -> QueryTrio:
    """Compatibility, example, and counterexample queries for a problem."""
    block = p.quantified_indices()
    a = p.assumptions
    return QueryTrio(
        assumptions_query=ExistentialQuery(p.vars, block, a),
        example_query=ExistentialQuery(p.vars, block, conj([a, p.hypothesis])),
        counterexample_query=ExistentialQuery(p.vars, block, conj([a, to_nnf(negate(p.hypothesis))])),
    )
