"""Tarski formulas: Boolean combinations of polynomial sign atoms.

Atoms compare a polynomial against zero with one of the six relations.
Every atom is kept in a canonical form (primitive lhs, positive leading
coefficient) so that syntactically different but equal atoms merge during
DNF conversion and metric computation.

Relations are manipulated through their sign sets, the subsets of
{-1, 0, +1} they admit.  Negation is complement, mirroring (for a negated
lhs) is reflection, and clause-level contradiction/subsumption checks are
intersections and inclusions of sign sets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .polynomial import Polynomial, VariableTable


class Rel(enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GE = ">="
    GT = ">"

    @property
    def signs(self) -> frozenset[int]:
        return _SIGNS[self]

    @property
    def negated(self) -> "Rel":
        return _NEGATED[self]

    @property
    def mirrored(self) -> "Rel":
        """Relation after negating the lhs (p rel 0  <=>  -p mirrored 0)."""
        return _MIRRORED[self]

    def holds(self, value: Fraction) -> bool:
        sign = (value > 0) - (value < 0)
        return sign in self.signs


_SIGNS = {
    Rel.LT: frozenset({-1}),
    Rel.LE: frozenset({-1, 0}),
    Rel.EQ: frozenset({0}),
    Rel.NE: frozenset({-1, 1}),
    Rel.GE: frozenset({0, 1}),
    Rel.GT: frozenset({1}),
}
_NEGATED = {
    Rel.LT: Rel.GE, Rel.GE: Rel.LT,
    Rel.LE: Rel.GT, Rel.GT: Rel.LE,
    Rel.EQ: Rel.NE, Rel.NE: Rel.EQ,
}
_MIRRORED = {
    Rel.LT: Rel.GT, Rel.GT: Rel.LT,
    Rel.LE: Rel.GE, Rel.GE: Rel.LE,
    Rel.EQ: Rel.EQ, Rel.NE: Rel.NE,
}
_BY_SIGNS = {v: k for k, v in _SIGNS.items()}


def rel_for_signs(signs: frozenset[int]) -> Optional[Rel]:
    """Relation matching a sign set; None for the empty or full set."""
    return _BY_SIGNS.get(signs)


class Formula:
    """Base class for formula tree nodes.  Nodes are immutable."""

    __slots__ = ()

    def __invert__(self) -> "Formula":
        return negate(self)

    def __and__(self, other: "Formula") -> "Formula":
        return conj([self, other])

    def __or__(self, other: "Formula") -> "Formula":
        return disj([self, other])


class _TrueConst(Formula):
    __slots__ = ()

    def __repr__(self) -> str:
        return "true"

    def __eq__(self, other) -> bool:
        return isinstance(other, _TrueConst)

    def __hash__(self) -> int:
        return hash("TrueConst")


class _FalseConst(Formula):
    __slots__ = ()

    def __repr__(self) -> str:
        return "false"

    def __eq__(self, other) -> bool:
        return isinstance(other, _FalseConst)

    def __hash__(self) -> int:
        return hash("FalseConst")


TRUE = _TrueConst()
FALSE = _FalseConst()


class Atom(Formula):
    """Canonical sign condition `lhs rel 0`.

    Construction canonicalizes: the lhs is divided by its positive content,
    the leading coefficient is made positive (mirroring the relation), and a
    constant lhs folds to TRUE/FALSE.  Use :func:`atom` which performs the
    folding; the class constructor rejects constant polynomials.
    """

    __slots__ = ("lhs", "rel", "_hash")

    def __init__(self, lhs: Polynomial, rel: Rel):
        if lhs.is_constant():
            raise ValueError("constant atoms must fold to TrueConst/FalseConst; use atom()")
        lhs = lhs.primitive()
        if lhs.leading_coefficient() < 0:
            lhs = -lhs
            rel = rel.mirrored
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "_hash", hash((lhs, rel)))

    def __setattr__(self, *a):
        raise AttributeError("Atom is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Atom) and self.rel is other.rel and self.lhs == other.lhs

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (self.lhs.items(), self.rel.value)

    def to_string(self, names: Sequence[str]) -> str:
        return f"{self.lhs.to_string(names)} {self.rel.value} 0"

    def __repr__(self) -> str:
        return f"Atom<{self.lhs!r} {self.rel.value} 0>"


class Not(Formula):
    __slots__ = ("child",)

    def __init__(self, child: Formula):
        object.__setattr__(self, "child", child)

    def __setattr__(self, *a):
        raise AttributeError("Not is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Not) and self.child == other.child

    def __hash__(self) -> int:
        return hash(("Not", self.child))

    def __repr__(self) -> str:
        return f"Not({self.child!r})"


class _Junction(Formula):
    __slots__ = ("children", "_hash")
    _tag = ""

    def __init__(self, children: Sequence[Formula]):
        children = tuple(children)
        if len(children) < 2:
            raise ValueError(f"{self._tag} needs at least 2 children; use conj()/disj()")
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash((self._tag, children)))

    def __setattr__(self, *a):
        raise AttributeError("junction nodes are immutable")

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self.children == other.children

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"{self._tag}({', '.join(map(repr, self.children))})"


class And(_Junction):
    __slots__ = ()
    _tag = "And"


class Or(_Junction):
    __slots__ = ()
    _tag = "Or"


def atom(lhs: Polynomial, rel: Rel) -> Formula:
    """Canonical atom; constant lhs folds to a truth constant."""
    if lhs.is_constant():
        return TRUE if rel.holds(lhs.constant_value()) else FALSE
    return Atom(lhs, rel)


def conj(children: Iterable[Formula]) -> Formula:
    """N-ary conjunction with flattening, constant folding, and dedup."""
    flat: list[Formula] = []
    seen = set()
    for c in children:
        if c is TRUE or isinstance(c, _TrueConst):
            continue
        if c is FALSE or isinstance(c, _FalseConst):
            return FALSE
        sub = c.children if isinstance(c, And) else (c,)
        for s in sub:
            if s is FALSE or isinstance(s, _FalseConst):
                return FALSE
            if s is TRUE or isinstance(s, _TrueConst):
                continue
            if s not in seen:
                seen.add(s)
                flat.append(s)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(flat)


def disj(children: Iterable[Formula]) -> Formula:
    """N-ary disjunction with flattening, constant folding, and dedup."""
    flat: list[Formula] = []
    seen = set()
    for c in children:
        if c is FALSE or isinstance(c, _FalseConst):
            continue
        if c is TRUE or isinstance(c, _TrueConst):
            return TRUE
        sub = c.children if isinstance(c, Or) else (c,)
        for s in sub:
            if s is TRUE or isinstance(s, _TrueConst):
                return TRUE
            if s is FALSE or isinstance(s, _FalseConst):
                continue
            if s not in seen:
                seen.add(s)
                flat.append(s)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(flat)


def negate(f: Formula) -> Formula:
    """Logical negation, pushed one level (atoms flip their relation)."""
    if isinstance(f, _TrueConst):
        return FALSE
    if isinstance(f, _FalseConst):
        return TRUE
    if isinstance(f, Atom):
        return Atom(f.lhs, f.rel.negated)
    if isinstance(f, Not):
        return f.child
    if isinstance(f, And):
        return disj([negate(c) for c in f.children])
    if isinstance(f, Or):
        return conj([negate(c) for c in f.children])
    raise TypeError(f"not a formula: {f!r}")


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: no Not nodes, negations absorbed into atoms."""
    if isinstance(f, (_TrueConst, _FalseConst, Atom)):
        return f
    if isinstance(f, Not):
        return to_nnf(negate(f.child))
    if isinstance(f, And):
        return conj([to_nnf(c) for c in f.children])
    if isinstance(f, Or):
        return disj([to_nnf(c) for c in f.children])
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# DNF
# ---------------------------------------------------------------------------

class DnfBlowupError(Exception):
    """Clause count would exceed the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"DNF clause count would exceed the cap of {cap}")
        self.cap = cap


DEFAULT_CLAUSE_CAP = 100_000

Clause = frozenset  # of Atom


def clause_is_contradictory(atoms: Iterable[Atom]) -> bool:
    """True when two atoms on the same polynomial admit no common sign."""
    signs: dict[Polynomial, frozenset[int]] = {}
    for a in atoms:
        s = signs.get(a.lhs, frozenset({-1, 0, 1})) & a.rel.signs
        if not s:
            return True
        signs[a.lhs] = s
    return False


def to_dnf(f: Formula, max_clauses: int = DEFAULT_CLAUSE_CAP) -> list[frozenset[Atom]]:
    """Disjunction of conjunctive clauses equivalent to f.

    Each clause is a frozenset of canonical atoms (duplicates merged).
    Clauses containing atoms with no common admissible sign on the same
    polynomial are dropped.  Raises :class:`DnfBlowupError` when the clause
    count would exceed `max_clauses` at any point of the distribution.
    """
    f = to_nnf(f)
    if isinstance(f, _FalseConst):
        return []
    if isinstance(f, _TrueConst):
        return [frozenset()]

    def rec(g: Formula) -> list[frozenset[Atom]]:
        if isinstance(g, _TrueConst):
            return [frozenset()]
        if isinstance(g, _FalseConst):
            return []
        if isinstance(g, Atom):
            return [frozenset([g])]
        if isinstance(g, Or):
            out: list[frozenset[Atom]] = []
            seen = set()
            for c in g.children:
                for cl in rec(c):
                    if cl not in seen:
                        seen.add(cl)
                        out.append(cl)
                if len(out) > max_clauses:
                    raise DnfBlowupError(max_clauses)
            return out
        if isinstance(g, And):
            acc: list[frozenset[Atom]] = [frozenset()]
            for c in g.children:
                branch = rec(c)
                nxt: list[frozenset[Atom]] = []
                seen = set()
                for left in acc:
                    for right in branch:
                        merged = left | right
                        if merged in seen or clause_is_contradictory(merged):
                            continue
                        seen.add(merged)
                        nxt.append(merged)
                        if len(nxt) > max_clauses:
                            raise DnfBlowupError(max_clauses)
                acc = nxt
                if not acc:
                    return []
            return acc
        raise TypeError(f"unexpected node in NNF: {g!r}")

    return rec(f)


def dnf_to_formula(clauses: Sequence[frozenset[Atom]]) -> Formula:
    return disj([conj(sorted(cl, key=Atom.sort_key)) for cl in clauses])


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

class MissingAssignmentError(KeyError):
    pass


def evaluate_at(f: Formula, point: Mapping[int, Fraction]) -> bool:
    """Exact truth value of a quantifier-free formula at a rational point.

    `point` is keyed by variable index and must cover every variable that
    occurs in f.
    """
    if isinstance(f, _TrueConst):
        return True
    if isinstance(f, _FalseConst):
        return False
    if isinstance(f, Atom):
        try:
            value = f.lhs.evaluate(point)
        except KeyError as e:
            raise MissingAssignmentError(f"no assignment for variable index {e.args[0]}") from None
        return f.rel.holds(value)
    if isinstance(f, Not):
        return not evaluate_at(f.child, point)
    if isinstance(f, And):
        return all(evaluate_at(c, point) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate_at(c, point) for c in f.children)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Structure queries
# ---------------------------------------------------------------------------

def collect_atoms(f: Formula) -> list[Atom]:
    """Distinct canonical atoms, in first-occurrence order."""
    out: list[Atom] = []
    seen = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            if g not in seen:
                seen.add(g)
                out.append(g)
        elif isinstance(g, Not):
            walk(g.child)
        elif isinstance(g, (And, Or)):
            for c in g.children:
                walk(c)

    walk(f)
    return out


def formula_variables(f: Formula) -> frozenset[int]:
    occ: set[int] = set()
    for a in collect_atoms(f):
        occ |= a.lhs.variables()
    return frozenset(occ)


@dataclass(frozen=True)
class FormulaMetrics:
    """Structural size measures of a quantifier-free formula."""

    atom_count: int
    polynomial_count: int
    variable_count: int
    max_total_degree: int
    mean_total_degree: Fraction
    per_variable_max_degree: dict[int, int]

    @property
    def max_per_variable_degree(self) -> int:
        return max(self.per_variable_max_degree.values(), default=0)


def formula_metrics(f: Formula) -> FormulaMetrics:
    """Counts and degrees over the distinct canonical atoms of f.

    Distinct polynomials are compared after atom canonicalization; the mean
    total degree is averaged over distinct polynomials.
    """
    atoms = collect_atoms(f)
    polys: list[Polynomial] = []
    seen = set()
    for a in atoms:
        if a.lhs not in seen:
            seen.add(a.lhs)
            polys.append(a.lhs)
    per_var: dict[int, int] = {}
    for p in polys:
        for i in p.variables():
            per_var[i] = max(per_var.get(i, 0), p.degree_in(i))
    degrees = [p.total_degree() for p in polys]
    return FormulaMetrics(
        atom_count=len(atoms),
        polynomial_count=len(polys),
        variable_count=len(per_var),
        max_total_degree=max(degrees, default=0),
        mean_total_degree=(
            Fraction(sum(degrees), len(degrees)) if degrees else Fraction(0)
        ),
        per_variable_max_degree=per_var,
    )


def map_atoms(f: Formula, fn: Callable[[Atom], Formula]) -> Formula:
    """Rebuild f with every atom replaced by fn(atom)."""
    if isinstance(f, (_TrueConst, _FalseConst)):
        return f
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, Not):
        return negate(map_atoms(f.child, fn))
    if isinstance(f, And):
        return conj([map_atoms(c, fn) for c in f.children])
    if isinstance(f, Or):
        return disj([map_atoms(c, fn) for c in f.children])
    raise TypeError(f"not a formula: {f!r}")
