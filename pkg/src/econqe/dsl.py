"""Native model language: parsing and emission.

One problem per source text::

    problem "marshall"
    vars v1 v2 v3 v4
    assume v1 < 0 and v2 > 0 and v3*v2 - 1 = v4 and v4 = v3*v1
    hypothesis v3 > 0 and v4 < 0

Declarations may also list `free` variables and a suggested elimination
`order`.  Relation chains expand (`a < b < c` becomes `a < b and b < c`),
`implies` desugars to a disjunction at parse time, and division is allowed
only by nonzero rational constants.  `#` starts a line comment.

Two intrinsics expand at parse time into generated conjunctions:
`gram_psd(p, q, ...)` (dot-product variables named `p_p`, `p_q`, ...) and
`nsd_minors(n, e11, e12, ..., enn)` (upper-triangle entries, row major).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import encoders
from .formula import (
    And, Atom, FALSE, Formula, Not, Or, Rel, TRUE, atom, conj, disj, negate,
)
from .polynomial import Polynomial, VariableTable
from .problem import TheoremProblem


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_KEYWORDS = {"problem", "vars", "free", "order", "assume", "hypothesis",
             "and", "or", "not", "implies"}
_INTRINSICS = {"gram_psd", "nsd_minors"}
_RELS = {"<": Rel.LT, "<=": Rel.LE, "=": Rel.EQ, "!=": Rel.NE, ">=": Rel.GE, ">": Rel.GT}


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, INT, STRING, REL, punctuation/operator literal, EOF
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == '"':
            j = i + 1
            while j < n and source[j] != '"':
                if source[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line, start_col)
            tokens.append(_Token("STRING", source[i + 1:j], line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(_Token("INT", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        two = source[i:i + 2]
        if two in ("<=", ">=", "!="):
            tokens.append(_Token("REL", two, line, start_col))
            i += 2
            col += 2
            continue
        if ch in "<>=":
            tokens.append(_Token("REL", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch in "()+-*/^,":
            tokens.append(_Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _PolyBacktrack(Exception):
    """Internal: a parenthesized group turned out not to be a polynomial."""


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.table: Optional[VariableTable] = None
        self._names: list[str] = []
        self._free: list[str] = []
        self._order: list[str] = []

    # -- token plumbing -------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, what: str = "") -> _Token:
        t = self.peek()
        if t.kind != kind:
            shown = t.text or t.kind
            raise ParseError(f"expected {what or kind}, found {shown!r}", t.line, t.col)
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "IDENT" and t.text == word

    def error(self, message: str) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col)

    # -- problem structure ----------------------------------------------

    def parse_problem(self, default_id: str) -> TheoremProblem:
        pid = default_id
        if self.at_keyword("problem"):
            self.advance()
            if self.peek().kind == "STRING":
                pid = self.advance().text
        while self.peek().kind == "IDENT" and self.peek().text in ("vars", "free", "order"):
            kind = self.advance().text
            names = self._ident_list()
            if not names:
                raise self.error(f"'{kind}' needs at least one variable name")
            {"vars": self._names, "free": self._free, "order": self._order}[kind].extend(names)
        dup = [n for n in self._free + self._order if n not in self._names]
        if dup:
            raise self.error(f"undeclared variable {dup[0]!r}")
        order = None
        if self._order:
            if sorted(self._order) != sorted(self._names):
                raise self.error("'order' must list every declared variable exactly once")
            order = [self._names.index(n) for n in self._order]
        self.table = VariableTable(self._names, suggested_order=order)

        if not self.at_keyword("assume"):
            raise self.error("expected 'assume'")
        self.advance()
        assumptions = self.formula()
        if not self.at_keyword("hypothesis"):
            raise self.error("expected 'hypothesis'")
        self.advance()
        hypothesis = self.formula()
        self.expect("EOF", "end of input")
        free = frozenset(self.table.by_name(n).index for n in self._free)
        return TheoremProblem(
            id=pid, vars=self.table, assumptions=assumptions,
            hypothesis=hypothesis, free_vars=free,
        )

    def _ident_list(self) -> list[str]:
        names = []
        while self.peek().kind == "IDENT" and self.peek().text not in _KEYWORDS:
            names.append(self.advance().text)
        return names

    # -- formulas ---------------------------------------------------------

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at_keyword("implies"):
            self.advance()
            right = self.formula()
            return disj([negate(left), right])
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.at_keyword("or"):
            self.advance()
            parts.append(self.conjunction())
        return disj(parts) if len(parts) > 1 else parts[0]

    def conjunction(self) -> Formula:
        parts = [self.unit()]
        while self.at_keyword("and"):
            self.advance()
            parts.append(self.unit())
        return conj(parts) if len(parts) > 1 else parts[0]

    def unit(self) -> Formula:
        t = self.peek()
        if self.at_keyword("not"):
            self.advance()
            return negate(self.unit())
        if t.kind == "IDENT" and t.text in _INTRINSICS and self.tokens[self.pos + 1].kind == "(":
            return self.intrinsic()
        if t.kind == "(":
            # Either a parenthesized formula or a parenthesized polynomial
            # starting an atom chain; try the polynomial reading first.
            saved = self.pos
            try:
                return self.atom_chain()
            except _PolyBacktrack:
                self.pos = saved
            self.advance()  # (
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        return self.atom_chain()

    def intrinsic(self) -> Formula:
        name_tok = self.advance()
        self.expect("(", "'('")
        args: list[_Token] = [self.advance()]
        while self.peek().kind == ",":
            self.advance()
            args.append(self.advance())
        self.expect(")", "')'")
        assert self.table is not None
        width = len(self.table)
        if name_tok.text == "gram_psd":
            vectors = []
            for a in args:
                if a.kind != "IDENT":
                    raise ParseError("gram_psd arguments must be vector names", a.line, a.col)
                vectors.append(a.text)
            try:
                dp = encoders.DotProductMap.from_table(vectors, self.table)
                return encoders.gram_psd_constraints(len(vectors), dp, width)
            except (KeyError, ValueError) as e:
                raise ParseError(str(e), name_tok.line, name_tok.col) from None
        if args[0].kind != "INT":
            raise ParseError("nsd_minors needs the dimension first", args[0].line, args[0].col)
        n = int(args[0].text)
        entries = []
        for a in args[1:]:
            if a.kind != "IDENT":
                raise ParseError("nsd_minors entries must be variable names", a.line, a.col)
            try:
                entries.append(self.table.by_name(a.text))
            except KeyError as e:
                raise ParseError(str(e.args[0]), a.line, a.col) from None
        try:
            hs = encoders.HessianSymbols.from_entries(n, entries)
            return encoders.nsd_minor_hypothesis(n, hs, width)
        except ValueError as e:
            raise ParseError(str(e), name_tok.line, name_tok.col) from None

    def atom_chain(self) -> Formula:
        first = self.poly()
        if self.peek().kind != "REL":
            if self.peek().kind == ")":
                # Came from a '(' that actually wrapped a formula.
                raise _PolyBacktrack()
            raise self.error("expected a relation")
        atoms = []
        left = first
        while self.peek().kind == "REL":
            rel = _RELS[self.advance().text]
            right = self.poly()
            atoms.append(atom(left - right, rel))
            left = right
        return conj(atoms) if len(atoms) > 1 else atoms[0]

    # -- polynomials -------------------------------------------------------

    def poly(self) -> Polynomial:
        left = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> Polynomial:
        left = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            right = self.factor()
            if op.kind == "*":
                left = left * right
            else:
                if not right.is_constant():
                    raise ParseError("division is only allowed by nonzero rational constants",
                                     op.line, op.col)
                c = right.constant_value()
                if c == 0:
                    raise ParseError("division by zero", op.line, op.col)
                left = left.scale(Fraction(1) / c)
        return left

    def factor(self) -> Polynomial:
        t = self.peek()
        if t.kind == "-":
            self.advance()
            return -self.factor()
        if t.kind == "+":
            self.advance()
            return self.factor()
        base = self.base()
        if self.peek().kind == "^":
            self.advance()
            e = self.expect("INT", "an integer exponent")
            return base ** int(e.text)
        return base

    def base(self) -> Polynomial:
        assert self.table is not None
        t = self.peek()
        width = len(self.table)
        if t.kind == "INT":
            self.advance()
            return Polynomial.constant(width, int(t.text))
        if t.kind == "IDENT":
            if t.text in _KEYWORDS:
                raise self.error(f"keyword {t.text!r} cannot appear inside a polynomial")
            self.advance()
            if t.text not in self.table:
                raise ParseError(f"undeclared variable {t.text!r}", t.line, t.col)
            return Polynomial.var(width, self.table.by_name(t.text).index)
        if t.kind == "(":
            self.advance()
            inner = self.poly()
            if self.peek().kind != ")":
                # Probably a formula-level paren; let unit() reparse it.
                raise _PolyBacktrack()
            self.advance()
            return inner
        raise self.error("expected a polynomial")


def parse_problem(text: str, default_id: str = "problem") -> TheoremProblem:
    """Parse one model from DSL source."""
    return _Parser(_tokenize(text)).parse_problem(default_id)


def parse_formula(text: str, table: VariableTable) -> Formula:
    """Parse a bare formula against an existing variable table."""
    p = _Parser(_tokenize(text))
    p.table = table
    f = p.formula()
    p.expect("EOF", "end of input")
    return f


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def formula_to_dsl(f: Formula, names: Sequence[str]) -> str:
    def walk(g: Formula, parent: str) -> str:
        if g is TRUE or g == TRUE:
            return "0 = 0"
        if g is FALSE or g == FALSE:
            return "0 != 0"
        if isinstance(g, Atom):
            return g.to_string(names)
        if isinstance(g, Not):
            return walk(negate(g), parent)
        if isinstance(g, And):
            s = " and ".join(walk(c, "and") for c in g.children)
            return s
        if isinstance(g, Or):
            s = " or ".join(walk(c, "or") for c in g.children)
            return f"({s})" if parent == "and" else s
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, "top")


def problem_to_dsl(p: TheoremProblem) -> str:
    names = p.vars.names
    lines = [f'problem "{p.id}"', "vars " + " ".join(names)]
    if p.free_vars:
        lines.append("free " + " ".join(names[i] for i in sorted(p.free_vars)))
    if p.vars.suggested_order is not None:
        lines.append("order " + " ".join(names[i] for i in p.vars.suggested_order))
    lines.append("assume " + formula_to_dsl(p.assumptions, names))
    lines.append("hypothesis " + formula_to_dsl(p.hypothesis, names))
    return "\n".join(lines) + "\n"


def problem_to_json_dict(p: TheoremProblem) -> dict:
    names = p.vars.names
    doc = {
        "id": p.id,
        "vars": list(names),
        "free": [names[i] for i in sorted(p.free_vars)],
        "assume": formula_to_dsl(p.assumptions, names),
        "hypothesis": formula_to_dsl(p.hypothesis, names),
    }
    if p.vars.suggested_order is not None:
        doc["order"] = [names[i] for i in p.vars.suggested_order]
    if p.metadata:
        doc["metadata"] = dict(p.metadata)
    return doc


def problem_from_json_dict(doc: dict) -> TheoremProblem:
    names = list(doc["vars"])
    order = [names.index(n) for n in doc["order"]] if "order" in doc else None
    table = VariableTable(names, suggested_order=order)
    assumptions = parse_formula(doc["assume"], table)
    hypothesis = parse_formula(doc["hypothesis"], table)
    free = frozenset(table.by_name(n).index for n in doc.get("free", []))
    return TheoremProblem(
        id=str(doc.get("id", "problem")), vars=table, assumptions=assumptions,
        hypothesis=hypothesis, free_vars=free, metadata=doc.get("metadata", {}),
    )


def problem_to_json(p: TheoremProblem) -> str:
    return json.dumps(problem_to_json_dict(p), indent=2)
