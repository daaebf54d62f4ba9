"""Shallow theory-aware simplification of NNF formulas.

Works purely on sign sets of canonical atoms sharing a polynomial:
conjunction intersects sign sets (empty intersection kills the clause,
merged sets strengthen atoms), disjunction unions them (full set proves
the disjunct).  Sign knowledge from conjunction siblings flows down into
nested disjunctions, which is what keeps virtual-substitution output from
growing uncontrollably: most guards are discharged by the surrounding
clause immediately.

No full redundancy elimination is attempted; results are equivalent, not
minimal.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .formula import (
    And, Atom, FALSE, Formula, Not, Or, Rel, TRUE,
    atom, conj, disj, rel_for_signs, to_nnf,
)
from .polynomial import Polynomial

ALL_SIGNS = frozenset({-1, 0, 1})

SignContext = Mapping[Polynomial, frozenset[int]]


def strip_even_powers(a: Atom) -> Formula:
    """Remove a square monomial factor, guarding its zeros.

    With lhs = (prod x_i^{2k_i}) * w the square factor is nonnegative, so
    strict relations become "every squared variable nonzero, and w rel 0"
    and weak ones "some squared variable zero, or w rel 0".  Keeps the
    degree growth of cleared root substitutions in check.
    """
    mono = a.lhs.common_monomial()
    even = tuple(d - (d % 2) for d in mono)
    if not any(even):
        return a
    w = a.lhs.divide_monomial(even)
    width = a.lhs.width
    squared = [i for i, d in enumerate(even) if d]
    inner = atom(w, a.rel)
    if a.rel in (Rel.LT, Rel.GT, Rel.NE):
        return conj([atom(Polynomial.var(width, i), Rel.NE) for i in squared] + [inner])
    return disj([atom(Polynomial.var(width, i), Rel.EQ) for i in squared] + [inner])


def strip_known_sign_factors(a: Atom, ctx: SignContext) -> Formula:
    """Divide out monomial factors whose variables have a known strict sign.

    With v > 0 in context, an atom v*w rel 0 is equivalent to w rel 0; a
    negative factor mirrors the relation per odd power.  Bare single
    variable atoms are left alone (they carry the sign knowledge itself).
    This is what keeps cleared root-substitution denominators from piling
    up degree.
    """
    mono = a.lhs.common_monomial()
    if not any(mono):
        return a
    if a.lhs.total_degree() == 1 and len(a.lhs.variables()) == 1:
        return a
    width = a.lhs.width
    strip = [0] * width
    flip = False
    for i, d in enumerate(mono):
        if not d:
            continue
        signs = ctx.get(Polynomial.var(width, i))
        if signs == frozenset({1}):
            strip[i] = d
        elif signs == frozenset({-1}):
            strip[i] = d
            if d % 2:
                flip = not flip
    if not any(strip):
        return a
    w = a.lhs.divide_monomial(tuple(strip))
    return atom(w, a.rel.mirrored if flip else a.rel)


def _atom_under_context(a: Atom, ctx: SignContext) -> Formula:
    g = strip_known_sign_factors(a, ctx)
    if not isinstance(g, Atom):
        return g
    a = g
    known = ctx.get(a.lhs)
    if known is None:
        return a
    meet = known & a.rel.signs
    if not meet:
        return FALSE
    if known <= a.rel.signs:
        return TRUE
    if meet != a.rel.signs:
        rel = rel_for_signs(meet)
        if rel is not None:
            return Atom(a.lhs, rel)
    return a


def _simplify_and(children, ctx: SignContext, depth: int) -> Formula:
    # Gather sign constraints contributed by atom conjuncts.
    local: dict[Polynomial, frozenset[int]] = {}
    others: list[Formula] = []
    stripped_any = False
    for c in children:
        if isinstance(c, Atom):
            g = strip_even_powers(c)
            if g is not c:
                stripped_any = True
                others.append(g)
                continue
            cur = local.get(c.lhs, ctx.get(c.lhs, ALL_SIGNS))
            cur &= c.rel.signs
            if not cur:
                return FALSE
            local[c.lhs] = cur
        else:
            others.append(c)
    merged_ctx = dict(ctx)
    merged_ctx.update(local)

    rebuilt: list[Formula] = []
    for lhs, signs in local.items():
        inherited = ctx.get(lhs)
        if inherited is not None and inherited <= signs:
            continue  # already guaranteed by the surrounding context
        rel = rel_for_signs(signs)
        if rel is None:
            # signs == ALL_SIGNS can only happen via inherited context
            continue
        merged = Atom(lhs, rel)
        stripped = strip_known_sign_factors(merged, merged_ctx)
        if stripped != merged:
            stripped_any = True
            if stripped == FALSE:
                return FALSE
            if stripped != TRUE:
                others.append(stripped)
            continue
        rebuilt.append(merged)

    changed = stripped_any
    for c in others:
        s = _simplify(c, merged_ctx, depth)
        if s is FALSE or s == FALSE:
            return FALSE
        if s != c:
            changed = True
        rebuilt.append(s)

    result = conj(rebuilt)
    # Nested simplification may surface new atom conjuncts; settle once more.
    if changed and isinstance(result, And):
        return _simplify_and(result.children, ctx, depth + 1)
    return result


def _simplify_or(children, ctx: SignContext, depth: int) -> Formula:
    union: dict[Polynomial, frozenset[int]] = {}
    atoms: list[Atom] = []
    others: list[Formula] = []
    for c in children:
        s = _simplify(c, ctx, depth)
        if s is TRUE or s == TRUE:
            return TRUE
        if s is FALSE or s == FALSE:
            continue
        if isinstance(s, Atom):
            union[s.lhs] = union.get(s.lhs, frozenset()) | s.rel.signs
            atoms.append(s)
        elif isinstance(s, Or):
            for g in s.children:
                if isinstance(g, Atom):
                    union[g.lhs] = union.get(g.lhs, frozenset()) | g.rel.signs
                    atoms.append(g)
                else:
                    others.append(g)
        else:
            others.append(s)

    rebuilt: list[Formula] = []
    for lhs, signs in union.items():
        known = ctx.get(lhs, ALL_SIGNS)
        if known <= signs:
            return TRUE  # the atom disjuncts alone cover every admissible sign
        rel = rel_for_signs(signs)
        if rel is not None:
            rebuilt.append(Atom(lhs, rel))
        else:
            rebuilt.extend(a for a in atoms if a.lhs == lhs)

    # Drop conjunction disjuncts subsumed by a stronger sibling clause.
    atom_sets: list[tuple[Formula, Optional[frozenset]]] = []
    for c in others:
        if isinstance(c, And) and all(isinstance(g, Atom) for g in c.children):
            atom_sets.append((c, frozenset(c.children)))
        else:
            atom_sets.append((c, None))
    kept: list[Formula] = []
    for i, (c, s) in enumerate(atom_sets):
        if s is not None:
            redundant = False
            for j, (_, t) in enumerate(atom_sets):
                if t is not None and t < s:
                    redundant = True  # strictly smaller clause is weaker, keeps the space
                    break
                if t == s and j < i:
                    redundant = True
                    break
            if redundant:
                continue
        kept.append(c)
    rebuilt.extend(kept)
    return disj(rebuilt)


def _simplify(f: Formula, ctx: SignContext, depth: int) -> Formula:
    if isinstance(f, Atom):
        g = strip_even_powers(f)
        if g is not f:
            return _simplify(g, ctx, depth)
        return _atom_under_context(f, ctx)
    if isinstance(f, And):
        return _simplify_and(f.children, ctx, depth)
    if isinstance(f, Or):
        return _simplify_or(f.children, ctx, depth)
    return f


def simplify(f: Formula, ctx: Optional[SignContext] = None) -> Formula:
    """Simplify an arbitrary formula (converted to NNF first)."""
    return _simplify(to_nnf(f), dict(ctx) if ctx else {}, 0)


def infer_sign(p: Polynomial, ctx: SignContext) -> Optional[int]:
    """Strict sign of p under the context, when cheaply derivable.

    Uses a direct context entry when present, else combines term signs:
    a sum of terms that all have the same provable strict sign keeps it.
    Returns +1, -1, or None (unknown or possibly zero).
    """
    if p.is_constant():
        v = p.constant_value()
        return 1 if v > 0 else (-1 if v < 0 else None)
    direct = ctx.get(p)
    if direct == frozenset({1}):
        return 1
    if direct == frozenset({-1}):
        return -1
    width = p.width
    overall: Optional[int] = 0
    for exps, c in p.items():
        sign = 1 if c > 0 else -1
        for i, d in enumerate(exps):
            if not d:
                continue
            var_signs = ctx.get(Polynomial.var(width, i))
            if var_signs == frozenset({1}):
                pass
            elif var_signs == frozenset({-1}):
                if d % 2:
                    sign = -sign
            elif var_signs == frozenset({-1, 1}) and d % 2 == 0:
                pass
            else:
                return None
        if overall == 0:
            overall = sign
        elif overall != sign:
            return None
    return overall if overall != 0 else None
