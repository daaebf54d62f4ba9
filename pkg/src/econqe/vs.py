"""Virtual substitution for variables of degree at most two.

Eliminates one existential variable x from a quantifier-free NNF formula
by substituting symbolic test points from an elimination set:

* minus infinity, covering solution intervals unbounded below;
* exact root expressions (p + q*sqrt(r)) / s of atoms with a weak
  relation, covering closed lower endpoints;
* root-plus-epsilon points of atoms with a strict relation, covering open
  lower endpoints.

Root expressions are cleared of denominators immediately; substituting
into an atom of degree d multiplies through by s^d (and once more by s
when d is odd, so the cleared power is even and the relation is
preserved without a sign split).  The resulting term U + V*sqrt(r) is
turned into polynomial sign conditions by the standard case analysis,
valid under the guard r >= 0.

When the formula is a conjunction containing an equality atom in x, the
elimination set shrinks to that atom's own roots (plus the branch where
the atom degenerates), which is what keeps chained comparative-statics
equalities from blowing up.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .formula import (
    And, Atom, FALSE, Formula, Or, Rel, TRUE,
    atom, collect_atoms, conj, disj, negate, to_nnf,
)
from .polynomial import Polynomial
from .simplify import simplify


class DegreeExceededError(ValueError):
    """An atom has degree above two in the elimination variable."""

    def __init__(self, var_index: int, lhs: Polynomial):
        super().__init__(
            f"virtual substitution limited to degree 2: variable index {var_index} "
            f"has degree {lhs.degree_in(var_index)} in {lhs!r}"
        )
        self.var_index = var_index
        self.lhs = lhs


class PointKind(enum.Enum):
    MINUS_INFINITY = "minus_infinity"
    EXACT_ROOT = "exact_root"
    ROOT_PLUS_EPS = "root_plus_eps"


@dataclass(frozen=True)
class RootExpr:
    """Symbolic root (p + q*sqrt(r)) / s with polynomial components.

    Radical-free roots use q = 0, r = 0.
    """

    p: Polynomial
    q: Polynomial
    r: Polynomial
    s: Polynomial

    @property
    def has_radical(self) -> bool:
        return not self.q.is_zero()


@dataclass(frozen=True)
class TestPoint:
    kind: PointKind
    root: Optional[RootExpr]  # absent for minus infinity
    guard: Formula


def _coeffs_upto_2(g: Polynomial, x: int) -> tuple[Polynomial, Polynomial, Polynomial]:
    cs = g.coefficients_in(x)
    if len(cs) > 3:
        raise DegreeExceededError(x, g)
    width = g.width
    zero = Polynomial.zero(width)
    cs = list(cs) + [zero] * (3 - len(cs))
    return cs[0], cs[1], cs[2]


def candidate_points(f: Formula, x: int, ctx: Optional[dict] = None) -> list[TestPoint]:
    """Lower-bound elimination set for x over the atoms of f.

    Always contains minus infinity; atom roots contribute exact points
    (weak relations) or root-plus-epsilon points (strict relations).  When
    the sign of a leading coefficient is derivable from the clause context
    the roots that can only close an interval from above are skipped, and
    quadratics keep a single branch of the root pair.
    """
    from .simplify import infer_sign

    ctx = ctx or {}
    points: list[TestPoint] = [TestPoint(PointKind.MINUS_INFINITY, None, TRUE)]
    seen: set[tuple] = set()

    def add(kind: PointKind, root: RootExpr, guard: Formula) -> None:
        key = (kind, root.p, root.q, root.r, root.s)
        if key not in seen:
            seen.add(key)
            points.append(TestPoint(kind, root, guard))

    width = None
    for a in collect_atoms(f):
        d = a.lhs.degree_in(x)
        if d <= 0:
            continue
        if d > 2:
            raise DegreeExceededError(x, a.lhs)
        width = a.lhs.width
        strict = a.rel in (Rel.LT, Rel.GT, Rel.NE)
        kind = PointKind.ROOT_PLUS_EPS if strict else PointKind.EXACT_ROOT
        c, b, a2 = _coeffs_upto_2(a.lhs, x)
        zero = Polynomial.zero(width)
        if a2.is_zero():
            sb = infer_sign(b, ctx)
            if sb is not None:
                r_eff = a.rel if sb > 0 else a.rel.mirrored
                if r_eff in (Rel.LT, Rel.LE):
                    continue  # solution is x below the root: minus infinity covers it
                add(kind, RootExpr(-c, zero, zero, b), TRUE)
            else:
                add(kind, RootExpr(-c, zero, zero, b), atom(b, Rel.NE))
            continue
        sa = infer_sign(a2, ctx)
        disc = b * b - Polynomial.constant(width, 4) * a2 * c
        disc_ok = atom(disc, Rel.GE)
        two_a = a2.scale(2)
        nonzero_a = TRUE if (a2.is_constant() or sa is not None) else atom(a2, Rel.NE)
        guard = conj([nonzero_a, disc_ok])
        if sa is None:
            for sign in (1, -1):
                add(kind, RootExpr(-b, Polynomial.constant(width, sign), disc, two_a), guard)
            if not a2.is_constant() and not b.is_zero():
                lin_guard = conj([atom(a2, Rel.EQ),
                                  TRUE if b.is_constant() else atom(b, Rel.NE)])
                add(kind, RootExpr(-c, zero, zero, b), lin_guard)
            continue
        # Known parabola direction: keep only roots that open intervals
        # from below.  q = -sa selects the smaller root, q = +sa the larger.
        r_eff = a.rel if sa > 0 else a.rel.mirrored
        if r_eff in (Rel.LE, Rel.LT):
            qs = [-sa]
        elif r_eff in (Rel.GE, Rel.GT):
            qs = [sa]
        else:
            qs = [-sa, sa]
        for q in qs:
            add(kind, RootExpr(-b, Polynomial.constant(width, q), disc, two_a), guard)
    return points


def atom_roots(g: Polynomial, x: int) -> list[tuple[RootExpr, Formula]]:
    """Symbolic roots of g in x with their applicability guards."""
    c, b, a = _coeffs_upto_2(g, x)
    width = g.width
    zero = Polynomial.zero(width)
    out: list[tuple[RootExpr, Formula]] = []
    if a.is_zero():
        if not b.is_zero():
            guard = TRUE if b.is_constant() else atom(b, Rel.NE)
            out.append((RootExpr(-c, zero, zero, b), guard))
        return out
    # Quadratic branch: two roots under a != 0, discriminant >= 0.
    disc = b * b - Polynomial.constant(width, 4) * a * c
    nonzero_a = TRUE if a.is_constant() else atom(a, Rel.NE)
    disc_ok = atom(disc, Rel.GE)
    two_a = a.scale(2)
    for sign in (1, -1):
        out.append((
            RootExpr(-b, Polynomial.constant(width, sign), disc, two_a),
            conj([nonzero_a, disc_ok]),
        ))
    # Degenerate linear branch when the quadratic coefficient can vanish.
    if not a.is_constant() and not b.is_zero():
        guard = conj([atom(a, Rel.EQ), TRUE if b.is_constant() else atom(b, Rel.NE)])
        out.append((RootExpr(-c, zero, zero, b), guard))
    return out


# ---------------------------------------------------------------------------
# Sign conditions for U + V*sqrt(r)
# ---------------------------------------------------------------------------

def _radical_sign_condition(U: Polynomial, V: Polynomial, r: Polynomial, rel: Rel) -> Formula:
    """Polynomial condition for (U + V*sqrt(r)) rel 0, assuming r >= 0."""
    if V.is_zero():
        return atom(U, rel)
    UU_VVr = U * U - V * V * r
    if rel is Rel.EQ:
        return conj([atom(U * V, Rel.LE), atom(UU_VVr, Rel.EQ)])
    if rel is Rel.NE:
        return disj([atom(U * V, Rel.GT), atom(UU_VVr, Rel.NE)])
    if rel is Rel.LE:
        return disj([
            conj([atom(U, Rel.LE), atom(UU_VVr, Rel.GE)]),
            conj([atom(V, Rel.LE), atom(UU_VVr, Rel.LE)]),
        ])
    if rel is Rel.LT:
        return disj([
            conj([atom(U, Rel.LT), atom(UU_VVr, Rel.GT)]),
            conj([atom(V, Rel.LE), atom(UU_VVr, Rel.LT)]),
            conj([atom(U, Rel.LT), atom(V, Rel.LE)]),
        ])
    if rel is Rel.GE:
        return _radical_sign_condition(-U, -V, r, Rel.LE)
    if rel is Rel.GT:
        return _radical_sign_condition(-U, -V, r, Rel.LT)
    raise AssertionError(rel)


def _substitute_root_into_poly(
    g: Polynomial, x: int, root: RootExpr
) -> tuple[Polynomial, Polynomial]:
    """g with x := (p + q*sqrt(r))/s, cleared by an even power of s.

    Returns (U, V) with the cleared value equal to U + V*sqrt(r).
    """
    coeffs = g.coefficients_in(x)
    d = len(coeffs) - 1
    width = g.width
    one = Polynomial.constant(width, 1)
    zero = Polynomial.zero(width)
    # (p + q*sqrt(r))^i = A_i + B_i*sqrt(r)
    A = [one]
    B = [zero]
    for _ in range(d):
        a_i, b_i = A[-1], B[-1]
        A.append(a_i * root.p + b_i * root.q * root.r)
        B.append(a_i * root.q + b_i * root.p)
    s_pow = [one]
    for _ in range(d):
        s_pow.append(s_pow[-1] * root.s)
    U = zero
    V = zero
    for i, gi in enumerate(coeffs):
        U = U + gi * A[i] * s_pow[d - i]
        V = V + gi * B[i] * s_pow[d - i]
    if d % 2 == 1:
        U = U * root.s
        V = V * root.s
    return U, V


def substitute_exact_root(a: Atom, x: int, root: RootExpr) -> Formula:
    U, V = _substitute_root_into_poly(a.lhs, x, root)
    return _radical_sign_condition(U, V, root.r, a.rel)


def substitute_eps_above(a: Atom, x: int, root: RootExpr) -> Formula:
    """Atom value just above the root: sign of the first nonzero Taylor slot."""
    g = a.lhs
    width = g.width
    coeffs = g.coefficients_in(x)
    d = len(coeffs) - 1
    # Taylor slots at the root: g, g' and g''/2 as polynomials in x.
    slots: list[Polynomial] = [g]
    if d >= 1:
        gp = Polynomial.zero(width)
        for i, gi in enumerate(coeffs[1:], start=1):
            gp = gp + gi.scale(i) * Polynomial.var(width, x) ** (i - 1)
        slots.append(gp)
    if d >= 2:
        slots.append(coeffs[2])

    def value_cond(h: Polynomial, rel: Rel) -> Formula:
        if h.degree_in(x) <= 0:
            return atom(h, rel)
        return substitute_exact_root(atom_as_is(h, rel), x, root)

    def chain(neg_rel: Rel, eq_ok: bool) -> Formula:
        # first nonzero slot satisfies neg_rel; all-zero allowed iff eq_ok
        result: Formula = TRUE if eq_ok else FALSE
        for h in reversed(slots):
            result = disj([
                value_cond(h, neg_rel),
                conj([value_cond(h, Rel.EQ), result]),
            ])
        return result

    rel = a.rel
    if rel is Rel.EQ:
        return conj([value_cond(h, Rel.EQ) for h in slots])
    if rel is Rel.NE:
        return disj([value_cond(h, Rel.NE) for h in slots])
    if rel is Rel.LT:
        return chain(Rel.LT, eq_ok=False)
    if rel is Rel.LE:
        return chain(Rel.LT, eq_ok=True)
    if rel is Rel.GT:
        return chain(Rel.GT, eq_ok=False)
    if rel is Rel.GE:
        return chain(Rel.GT, eq_ok=True)
    raise AssertionError(rel)


def atom_as_is(lhs: Polynomial, rel: Rel) -> Atom:
    """Atom constructor bypassing constant folding (lhs known non-constant)."""
    return Atom(lhs, rel)


def substitute_minus_infinity(a: Atom, x: int) -> Formula:
    """Atom value for x negative of arbitrarily large magnitude."""
    coeffs = a.lhs.coefficients_in(x)
    if len(coeffs) > 3:
        raise DegreeExceededError(x, a.lhs)

    def chain(neg_rel: Rel, eq_ok: bool) -> Formula:
        # Nested low-to-high so the highest-degree slot is tested first;
        # slot i dominates with sign (-1)^i * sign(gi).
        result: Formula = TRUE if eq_ok else FALSE
        for i, gi in enumerate(coeffs):
            rel = neg_rel if i % 2 == 0 else neg_rel.mirrored
            result = disj([atom(gi, rel), conj([atom(gi, Rel.EQ), result])])
        return result

    rel = a.rel
    if rel is Rel.EQ:
        return conj([atom(g, Rel.EQ) for g in coeffs])
    if rel is Rel.NE:
        return disj([atom(g, Rel.NE) for g in coeffs])
    if rel is Rel.LT:
        return chain(Rel.LT, eq_ok=False)
    if rel is Rel.LE:
        return chain(Rel.LT, eq_ok=True)
    if rel is Rel.GT:
        return chain(Rel.GT, eq_ok=False)
    if rel is Rel.GE:
        return chain(Rel.GT, eq_ok=True)
    raise AssertionError(rel)


def apply_test_point(f: Formula, x: int, tp: TestPoint) -> Formula:
    """f[x := tp], guard not included."""

    def sub_atom(a: Atom) -> Formula:
        if a.lhs.degree_in(x) <= 0:
            return a
        if tp.kind is PointKind.MINUS_INFINITY:
            return substitute_minus_infinity(a, x)
        assert tp.root is not None
        if tp.kind is PointKind.EXACT_ROOT:
            return substitute_exact_root(a, x, tp.root)
        return substitute_eps_above(a, x, tp.root)

    from .formula import map_atoms

    return map_atoms(f, sub_atom)


def _top_level_conjunct_atoms(f: Formula) -> list[Atom]:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, And):
        return [c for c in f.children if isinstance(c, Atom)]
    return []


def _clause_sign_context(f: Formula) -> dict:
    ctx: dict[Polynomial, frozenset[int]] = {}
    for a in _top_level_conjunct_atoms(f):
        ctx[a.lhs] = ctx.get(a.lhs, frozenset({-1, 0, 1})) & a.rel.signs
    return ctx


def _coeff_rank(c: Polynomial, ctx: dict) -> int:
    """How cheaply a pivot coefficient eliminates: constants best, then
    polynomials with a known strict sign (degenerate branch dies), then rest."""
    if c.is_constant():
        return 0
    signs = ctx.get(c)
    if signs in (frozenset({1}), frozenset({-1})):
        return 1
    return 2


def _equality_pivot(f: Formula, x: int) -> Optional[Atom]:
    """A top-level equality conjunct containing x, preferring low degree and
    a coefficient that is constant or has a context-known strict sign."""
    best = None
    best_key = None
    ctx = _clause_sign_context(f)
    for a in _top_level_conjunct_atoms(f):
        if a.rel is not Rel.EQ:
            continue
        d = a.lhs.degree_in(x)
        if d < 1 or d > 2:
            continue
        cs = a.lhs.coefficients_in(x)
        key = (d, _coeff_rank(cs[-1], ctx), a.sort_key())
        if best_key is None or key < best_key:
            best, best_key = a, key
    return best


def _drop_conjunct(f: Formula, a: Atom) -> Formula:
    if isinstance(f, Atom):
        return TRUE
    assert isinstance(f, And)
    return conj([c for c in f.children if c != a])


def eliminate_branches(f: Formula, x: int) -> list[tuple[Formula, Formula, TestPoint]]:
    """Branches (guard, substituted formula, test point) whose disjunction
    is equivalent to "exists x. f".

    With an equality pivot the set shrinks to the pivot's roots plus the
    branch where every x-coefficient of the pivot vanishes.
    """
    pivot = _equality_pivot(f, x)
    branches: list[tuple[Formula, Formula, TestPoint]] = []
    if pivot is not None:
        cs = pivot.lhs.coefficients_in(x)
        for root, guard in atom_roots(pivot.lhs, x):
            tp = TestPoint(PointKind.EXACT_ROOT, root, guard)
            branches.append((guard, apply_test_point(f, x, tp), tp))
        # All x-coefficients vanish: the pivot stops constraining x.
        degenerate = conj([atom(c, Rel.EQ) for c in cs])
        if degenerate != FALSE:
            rest = conj([degenerate, _drop_conjunct(f, pivot)])
            for guard, sub, tp in eliminate_branches_no_pivot(rest, x):
                branches.append((guard, sub, tp))
        return branches
    return eliminate_branches_no_pivot(f, x)


def eliminate_branches_no_pivot(f: Formula, x: int) -> list[tuple[Formula, Formula, TestPoint]]:
    ctx = _clause_sign_context(f)
    return [
        (tp.guard, apply_test_point(f, x, tp), tp)
        for tp in candidate_points(f, x, ctx)
    ]


def vs_eliminate_var(f: Formula, x: int) -> Formula:
    """Quantifier-free formula equivalent to "exists x. f" over the reals.

    f must be quantifier-free with degree <= 2 in x everywhere; the result
    mentions only the remaining variables.
    """
    f = simplify(to_nnf(f))
    if f == TRUE or f == FALSE:
        return f
    return simplify(disj([
        conj([guard, sub]) for guard, sub, _ in eliminate_branches(f, x)
    ]))
