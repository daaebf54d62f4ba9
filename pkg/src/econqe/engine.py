"""Built-in decision and quantifier-elimination engine.

Fully existential queries run through a two-stage pipeline: seeded witness
sampling first (cheap, settles most satisfiable checks), then clause-wise
virtual substitution after distributing the existential block over the
DNF.  Failures never lie: anything the engine cannot settle comes back
UNKNOWN with a reason string, and every SAT verdict that carries a witness
has been validated by exact evaluation.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .formula import (
    And, Atom, DnfBlowupError, FALSE, Formula, Or, Rel, TRUE,
    atom, collect_atoms, conj, disj, dnf_to_formula, evaluate_at,
    formula_variables, to_dnf, to_nnf,
)
from .polynomial import Polynomial
from .problem import ExistentialQuery
from .simplify import simplify
from .vs import (
    DegreeExceededError, PointKind, TestPoint, eliminate_branches, vs_eliminate_var,
)

__all__ = [
    "EngineConfig", "Verdict", "VerdictStatus", "DegreeExceededError",
    "EngineDeadlineError", "witness_search", "decide_existential", "qe_free",
    "vs_eliminate_var", "choose_elimination_order", "distribute_exists_over_dnf",
]


class VerdictStatus:
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[dict[int, Fraction]] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.witness is not None and self.status != VerdictStatus.SAT:
            raise ValueError("witness only allowed on SAT verdicts")

    @property
    def is_sat(self) -> bool:
        return self.status == VerdictStatus.SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == VerdictStatus.UNSAT

    @property
    def is_unknown(self) -> bool:
        return self.status == VerdictStatus.UNKNOWN


@dataclass(frozen=True)
class EngineConfig:
    """Tuning knobs; the VS degree cap is fixed by the method."""

    sample_count: int = 40
    seed: int = 0
    vs_max_degree: int = 2
    dnf_clause_cap: int = 100_000
    deadline: float = 60.0  # seconds per query

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.deadline <= 0:
            raise ValueError("deadline must be positive")
        if self.vs_max_degree != 2:
            raise ValueError("the virtual-substitution degree cap is fixed at 2")


class EngineDeadlineError(TimeoutError):
    pass


class _Deadline:
    def __init__(self, seconds: float):
        self.expires = time.monotonic() + seconds

    def check(self) -> None:
        if time.monotonic() > self.expires:
            raise EngineDeadlineError()


def _require_fully_existential(query: ExistentialQuery) -> None:
    free = query.free_indices()
    if free:
        raise ValueError(f"query is not fully existential; free indices {sorted(free)}")


# ---------------------------------------------------------------------------
# Witness sampling
# ---------------------------------------------------------------------------

def _build_palette() -> tuple[Fraction, ...]:
    values = [Fraction(i) for i in range(-10, 11)]
    values += [Fraction(i, 2) for i in range(-19, 20) if i % 2]
    values += [Fraction(i, 3) for i in range(-29, 30) if i % 3]
    return tuple(values)


_PALETTE = _build_palette()


def _solve_linear_equality(a: Atom, point: dict[int, Fraction]) -> Optional[tuple[int, Fraction]]:
    """Solve one equality atom for an unassigned variable it is linear in.

    Requires every other variable of the atom to be assigned already and a
    nonzero evaluated coefficient.
    """
    unassigned = [i for i in a.lhs.variables() if i not in point]
    if len(unassigned) != 1:
        return None
    x = unassigned[0]
    if a.lhs.degree_in(x) != 1:
        return None
    coeffs = a.lhs.coefficients_in(x)
    slope = coeffs[1].evaluate(point)
    if slope == 0:
        return None
    return x, -coeffs[0].evaluate(point) / slope


_OPENING_GRID = (
    Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2),
    Fraction(3), Fraction(-1, 3),
)
_OPENING_VALUES = _OPENING_GRID


def _sample_clause(
    atoms: Sequence[Atom],
    var_order: Sequence[int],
    rng: random.Random,
    attempts: int,
    deadline: Optional[_Deadline],
) -> Optional[dict[int, Fraction]]:
    equalities = [a for a in atoms if a.rel is Rel.EQ]
    clause = conj(sorted(atoms, key=Atom.sort_key))
    # Assign variables that appear in many equalities first: each assignment
    # then unlocks linear solving of the equalities themselves.
    eq_count = {x: 0 for x in var_order}
    for eq in equalities:
        for x in eq.lhs.variables():
            if x in eq_count:
                eq_count[x] += 1
    order = sorted(var_order, key=lambda x: (-eq_count[x], x))
    g = len(_OPENING_GRID)
    for attempt in range(attempts):
        if deadline is not None:
            deadline.check()
        point: dict[int, Fraction] = {}

        def settle() -> None:
            progress = True
            while progress:
                progress = False
                for eq in equalities:
                    solved = _solve_linear_equality(eq, point)
                    if solved is not None:
                        point[solved[0]] = solved[1]
                        progress = True

        settle()
        slot = 0
        for x in order:
            if x in point:
                continue
            if attempt < g ** 3:
                # Systematic sweep of sign/size patterns over the first
                # few genuinely sampled variables.
                point[x] = _OPENING_GRID[(attempt // (g ** min(slot, 2))) % g]
            else:
                point[x] = rng.choice(_PALETTE)
            slot += 1
            settle()
        if evaluate_at(clause, point):
            return point
    return None


def witness_search(
    query: ExistentialQuery,
    cfg: EngineConfig,
    deadline: Optional[_Deadline] = None,
) -> Verdict:
    """SAT-or-UNKNOWN search by seeded palette sampling.

    Per DNF clause, equality atoms that become linear in a single
    unassigned variable are solved exactly; remaining variables draw from
    a fixed palette of small integers, halves, and thirds.  Deterministic
    for a given seed.  Never returns UNSAT.
    """
    _require_fully_existential(query)
    rng = random.Random(cfg.seed)
    matrix = query.matrix
    try:
        clauses = to_dnf(matrix, cfg.dnf_clause_cap)
    except DnfBlowupError:
        clauses = None

    if clauses is None:
        order = sorted(formula_variables(matrix))
        for attempt in range(cfg.sample_count):
            if deadline is not None:
                deadline.check()
            if attempt < len(_OPENING_VALUES):
                point = {x: _OPENING_VALUES[attempt] for x in order}
            else:
                point = {x: rng.choice(_PALETTE) for x in order}
            if evaluate_at(matrix, point):
                return Verdict(VerdictStatus.SAT, witness=_pad_witness(point, query))
        return Verdict(VerdictStatus.UNKNOWN, reason="no-witness-found")

    if not clauses:
        return Verdict(VerdictStatus.UNKNOWN, reason="no-witness-found")
    per_clause = max(8, cfg.sample_count // len(clauses))
    for clause in clauses:
        order = sorted(set().union(*[a.lhs.variables() for a in clause]) if clause else set())
        point = _sample_clause(sorted(clause, key=Atom.sort_key), order, rng, per_clause, deadline)
        if point is not None and evaluate_at(matrix, {**_zero_fill(query), **point}):
            return Verdict(VerdictStatus.SAT, witness=_pad_witness(point, query))
    return Verdict(VerdictStatus.UNKNOWN, reason="no-witness-found")


def _zero_fill(query: ExistentialQuery) -> dict[int, Fraction]:
    return {i: Fraction(0) for i in query.quantified}


def _pad_witness(point: dict[int, Fraction], query: ExistentialQuery) -> dict[int, Fraction]:
    full = _zero_fill(query)
    full.update(point)
    return full


# ---------------------------------------------------------------------------
# Elimination order and DNF distribution
# ---------------------------------------------------------------------------

def choose_elimination_order(
    f: Formula,
    quantified: Sequence[int],
    suggested: Optional[Sequence[int]] = None,
) -> list[int]:
    """Deterministic variable order for elimination.

    A suggested order wins verbatim (restricted to the requested
    variables); otherwise sort ascending by maximum degree in f, then by
    the number of atoms mentioning the variable, then by index.
    """
    wanted = set(quantified)
    if suggested is not None:
        return [i for i in suggested if i in wanted]
    atoms = collect_atoms(f)
    degree: dict[int, int] = {i: 0 for i in quantified}
    count: dict[int, int] = {i: 0 for i in quantified}
    for a in atoms:
        for i in a.lhs.variables():
            if i in wanted:
                degree[i] = max(degree[i], a.lhs.degree_in(i))
                count[i] += 1
    return sorted(quantified, key=lambda i: (degree[i], count[i], i))


def distribute_exists_over_dnf(
    query: ExistentialQuery,
    max_clauses: int = 100_000,
) -> list[ExistentialQuery]:
    """One existential sub-problem per DNF clause of the matrix.

    Each sub-problem quantifies only the variables occurring in its
    clause; the disjunction of sub-answers equals the original answer.
    """
    clauses = to_dnf(query.matrix, max_clauses)
    out = []
    for clause in clauses:
        matrix = conj(sorted(clause, key=Atom.sort_key))
        occurring = formula_variables(matrix)
        block = tuple(i for i in query.quantified if i in occurring)
        out.append(ExistentialQuery(query.vars, block, matrix))
    return out


# ---------------------------------------------------------------------------
# Linear refutation pre-pass
# ---------------------------------------------------------------------------

_FM_ROW_CAP = 700


def _linear_refute(atoms: Sequence[Atom]) -> bool:
    """True when the total-degree-1 subset of a clause is infeasible.

    Exact Fourier-Motzkin with equality substitution; gives up (returns
    False) past a row cap.  A True result soundly refutes the whole clause
    since it only uses a subset of its constraints.
    """
    rows: list[tuple[dict[int, Fraction], Fraction, Rel]] = []
    for a in atoms:
        if a.lhs.total_degree() > 1 or a.rel is Rel.NE:
            continue
        coeffs: dict[int, Fraction] = {}
        const = Fraction(0)
        for exps, c in a.lhs.items():
            nz = [i for i, d in enumerate(exps) if d]
            if nz:
                coeffs[nz[0]] = c
            else:
                const = c
        rel = a.rel
        if rel in (Rel.GE, Rel.GT):
            coeffs = {i: -c for i, c in coeffs.items()}
            const = -const
            rel = Rel.LE if rel is Rel.GE else Rel.LT
        rows.append((coeffs, const, rel))
    if len(rows) < 2:
        return False

    def ground_violated(row) -> bool:
        coeffs, const, rel = row
        if coeffs:
            return False
        return not rel.holds(const)

    while True:
        for row in rows:
            if ground_violated(row):
                return True
        variables = sorted({i for coeffs, _, _ in rows for i in coeffs})
        if not variables:
            return False
        # Substitute one equality exactly when available.
        eq_row = next((r for r in rows if r[2] is Rel.EQ and r[0]), None)
        if eq_row is not None:
            coeffs, const, _ = eq_row
            x = min(coeffs)
            cx = coeffs[x]
            rest = {i: c for i, c in coeffs.items() if i != x}
            new_rows = []
            for r in rows:
                if r is eq_row:
                    continue
                rc, rconst, rrel = r
                if x not in rc:
                    new_rows.append(r)
                    continue
                factor = rc[x] / cx
                nc = {i: c for i, c in rc.items() if i != x}
                for i, c in rest.items():
                    nc[i] = nc.get(i, Fraction(0)) - factor * c
                    if nc[i] == 0:
                        del nc[i]
                new_rows.append((nc, rconst - factor * const, rrel))
            rows = new_rows
            continue
        # Fourier-Motzkin elimination of the variable with the cheapest
        # lower x upper combination count.
        def cost(x):
            lo = sum(1 for rc, _, _ in rows if rc.get(x, 0) < 0)
            hi = sum(1 for rc, _, _ in rows if rc.get(x, 0) > 0)
            return lo * hi
        x = min(variables, key=lambda v: (cost(v), v))
        lowers, uppers, keep = [], [], []
        for r in rows:
            cx = r[0].get(x, Fraction(0))
            if cx == 0:
                keep.append(r)
            elif cx > 0:
                uppers.append(r)
            else:
                lowers.append(r)
        if len(keep) + len(lowers) * len(uppers) > _FM_ROW_CAP:
            return False
        new_rows = list(keep)
        for lc, lconst, lrel in lowers:
            for uc, uconst, urel in uppers:
                scale_l = uc[x]
                scale_u = -lc[x]
                nc: dict[int, Fraction] = {}
                for i, c in lc.items():
                    if i != x:
                        nc[i] = nc.get(i, Fraction(0)) + scale_l * c
                for i, c in uc.items():
                    if i != x:
                        nc[i] = nc.get(i, Fraction(0)) + scale_u * c
                nc = {i: c for i, c in nc.items() if c != 0}
                nconst = scale_l * lconst + scale_u * uconst
                nrel = Rel.LT if (lrel is Rel.LT or urel is Rel.LT) else Rel.LE
                new_rows.append((nc, nconst, nrel))
        rows = new_rows


# ---------------------------------------------------------------------------
# Clause-wise decision by virtual substitution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _ChainStep:
    var: int
    point: TestPoint
    before: Formula  # simplified formula this step eliminated `var` from


class _Sat(Exception):
    def __init__(self, witness: Optional[dict[int, Fraction]]):
        self.witness = witness


def _exact_sqrt(v: Fraction) -> Optional[Fraction]:
    if v < 0:
        return None
    import math

    num = math.isqrt(v.numerator)
    den = math.isqrt(v.denominator)
    if num * num == v.numerator and den * den == v.denominator:
        return Fraction(num, den)
    return None


def _materialize_witness(
    chain: Sequence[_ChainStep],
    block: Sequence[int],
) -> Optional[dict[int, Fraction]]:
    """Concrete rational point from a successful elimination branch.

    Walks the chain backwards; each step's variable is recovered from its
    root expression (when rational) or by a bounded scan just above the
    root / towards minus infinity, checked exactly against the formula the
    step eliminated from.  Returns None when some step cannot be realized
    with a rational value.
    """
    point = {i: Fraction(0) for i in block}
    for step in reversed(chain):
        candidates: list[Fraction] = []
        tp = step.point
        base: Optional[Fraction] = None
        if tp.root is not None:
            s = tp.root.s.evaluate(point)
            if s != 0:
                if tp.root.has_radical:
                    rv = tp.root.r.evaluate(point)
                    sq = _exact_sqrt(rv) if rv >= 0 else None
                    if sq is not None:
                        base = (tp.root.p.evaluate(point) + tp.root.q.evaluate(point) * sq) / s
                else:
                    base = tp.root.p.evaluate(point) / s
        if tp.kind is PointKind.EXACT_ROOT and base is not None:
            candidates.append(base)
        elif tp.kind is PointKind.ROOT_PLUS_EPS and base is not None:
            candidates.extend(base + Fraction(1, 2 ** k) for k in range(0, 24, 3))
        elif tp.kind is PointKind.MINUS_INFINITY:
            candidates.extend(Fraction(-(2 ** k)) for k in range(0, 40, 4))
        candidates.extend(_PALETTE)
        found = None
        for v in candidates:
            if evaluate_at(step.before, {**point, step.var: v}):
                found = v
                break
        if found is None:
            return None
        point[step.var] = found
    return point


def _decide_branchwise(
    f: Formula,
    vars_left: list[int],
    cfg: EngineConfig,
    deadline: _Deadline,
    suggested: Optional[Sequence[int]],
    chain: list[_ChainStep],
    block: Sequence[int],
) -> Optional[str]:
    """Returns None when this branch is UNSAT, an unknown-reason string when
    undecided, and raises _Sat on success."""
    deadline.check()
    f = simplify(f)
    if f == TRUE:
        raise _Sat(_materialize_witness(chain, block))
    if f == FALSE:
        return None
    if isinstance(f, (And, Atom)):
        conjuncts = f.children if isinstance(f, And) else (f,)
        top_atoms = [c for c in conjuncts if isinstance(c, Atom)]
        if len(top_atoms) >= 2 and _linear_refute(top_atoms):
            return None
    occurring = formula_variables(f)
    vars_here = [v for v in vars_left if v in occurring]
    if not vars_here:
        # Fully existential queries cannot leave residual variables.
        return "internal-residual"
    order = choose_elimination_order(f, vars_here, suggested)
    x = order[0]
    if max(a.lhs.degree_in(x) for a in collect_atoms(f) if x in a.lhs.variables()) > 2:
        return "vs-degree-exceeded"
    rest = [v for v in vars_here if v != x]
    unknown: Optional[str] = None
    try:
        branches = eliminate_branches(f, x)
    except DegreeExceededError:
        return "vs-degree-exceeded"
    for guard, sub, tp in branches:
        g = simplify(conj([guard, sub]))
        if g == FALSE:
            continue
        try:
            clauses = to_dnf(g, cfg.dnf_clause_cap)
        except DnfBlowupError:
            unknown = "clause-cap"
            continue
        for clause in clauses:
            sub_f = conj(sorted(clause, key=Atom.sort_key))
            step = _ChainStep(x, tp, f)
            r = _decide_branchwise(sub_f, rest, cfg, deadline, suggested, chain + [step], block)
            if r is not None:
                unknown = r
    return unknown


def decide_existential(query: ExistentialQuery, cfg: EngineConfig) -> Verdict:
    """Decide a fully existential query: witness sampling, then clause-wise
    virtual substitution.  All failures surface as UNKNOWN with a reason."""
    _require_fully_existential(query)
    deadline = _Deadline(cfg.deadline)
    try:
        w = witness_search(query, cfg, deadline)
    except EngineDeadlineError:
        return Verdict(VerdictStatus.UNKNOWN, reason="timeout")
    if w.is_sat:
        return w

    try:
        subs = distribute_exists_over_dnf(query, cfg.dnf_clause_cap)
    except DnfBlowupError:
        return Verdict(VerdictStatus.UNKNOWN, reason="clause-cap")

    suggested = query.vars.suggested_order
    unknown: Optional[str] = None
    try:
        for sub in subs:
            r = _decide_branchwise(
                sub.matrix, list(sub.quantified), cfg, deadline,
                suggested, [], sub.quantified,
            )
            if r is not None:
                unknown = r
    except _Sat as sat:
        witness = sat.witness
        if witness is not None:
            witness = _pad_witness(witness, query)
            if not evaluate_at(query.matrix, witness):
                witness = None  # never surface an unvalidated point
        return Verdict(VerdictStatus.SAT, witness=witness)
    except EngineDeadlineError:
        return Verdict(VerdictStatus.UNKNOWN, reason="timeout")
    if unknown is None:
        return Verdict(VerdictStatus.UNSAT)
    return Verdict(VerdictStatus.UNKNOWN, reason=unknown)


# ---------------------------------------------------------------------------
# Quantifier elimination over free variables
# ---------------------------------------------------------------------------

def qe_free(query: ExistentialQuery, cfg: EngineConfig) -> Formula:
    """Eliminate the quantified block, leaving a formula over free variables.

    Result is equivalent over the reals, simplified by constant folding,
    duplicate-clause removal and per-clause sign pruning; no canonical
    minimality is promised.  Raises DegreeExceededError or
    EngineDeadlineError.
    """
    deadline = _Deadline(cfg.deadline)
    matrix = simplify(to_nnf(query.matrix))
    occurring = formula_variables(matrix)
    todo = [v for v in query.quantified if v in occurring]
    if not todo:
        return matrix
    suggested = query.vars.suggested_order
    clauses = to_dnf(matrix, cfg.dnf_clause_cap)
    pieces: list[Formula] = []
    for clause in clauses:
        g: Formula = conj(sorted(clause, key=Atom.sort_key))
        remaining = [v for v in todo if v in formula_variables(g)]
        while remaining:
            deadline.check()
            x = choose_elimination_order(g, remaining, suggested)[0]
            g = vs_eliminate_var(g, x)
            if g == TRUE or g == FALSE:
                break
            remaining = [v for v in remaining if v != x and v in formula_variables(g)]
        pieces.append(g)
    result = simplify(disj(pieces))
    try:
        return dnf_to_formula(to_dnf(result, cfg.dnf_clause_cap))
    except DnfBlowupError:
        return result
