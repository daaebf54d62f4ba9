"""SMT-LIB 2 emission and parsing for the QF_NRA fragment used here.

Scripts declare Real constants, assert one or more Boolean combinations of
polynomial constraints, and check satisfiability.  Everything outside that
fragment errors loudly with a source position rather than being
approximated.  Emission is deterministic: identical input yields a
byte-identical script.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .formula import And, Atom, FALSE, Formula, Not, Or, Rel, TRUE, atom, conj, disj, negate
from .polynomial import Polynomial, VariableTable
from .problem import ExistentialQuery


class SmtError(ValueError):
    def __init__(self, message: str, pos: Optional[int] = None, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.pos = pos
        self.line = line


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z_~!@$%^&*+=<>.?/-][A-Za-z0-9_~!@$%^&*+=<>.?/-]*$")


def smt_symbol(name: str) -> str:
    if _SIMPLE_SYMBOL.match(name):
        return name
    return "|" + name.replace("|", "") + "|"


def _emit_rational(c: Fraction) -> str:
    if c.denominator == 1:
        n = c.numerator
        return str(n) if n >= 0 else f"(- {-n})"
    body = f"(/ {abs(c.numerator)} {c.denominator})"
    return body if c.numerator >= 0 else f"(- {body})"


def _emit_poly(p: Polynomial, names: Sequence[str]) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.items():
        factors = []
        for i, d in enumerate(exps):
            factors.extend([smt_symbol(names[i])] * d)
        if not factors:
            parts.append(_emit_rational(c))
        elif c == 1:
            parts.append(factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")")
        else:
            parts.append("(* " + _emit_rational(c) + " " + " ".join(factors) + ")")
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


_REL_SMT = {Rel.LT: "<", Rel.LE: "<=", Rel.EQ: "=", Rel.GE: ">=", Rel.GT: ">"}


def _emit_formula(f: Formula, names: Sequence[str]) -> str:
    if f == TRUE:
        return "true"
    if f == FALSE:
        return "false"
    if isinstance(f, Atom):
        p = _emit_poly(f.lhs, names)
        if f.rel is Rel.NE:
            return f"(not (= {p} 0))"
        return f"({_REL_SMT[f.rel]} {p} 0)"
    if isinstance(f, Not):
        return f"(not {_emit_formula(f.child, names)})"
    if isinstance(f, And):
        return "(and " + " ".join(_emit_formula(c, names) for c in f.children) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(_emit_formula(c, names) for c in f.children) + ")"
    raise TypeError(f"not a formula: {f!r}")


def emit_smt2(
    query: ExistentialQuery,
    logic: str = "QF_NRA",
    get_model: bool = False,
    info: Optional[dict[str, str]] = None,
) -> str:
    """Deterministic SMT-LIB 2 script for a fully existential query.

    One declare-fun per table variable in declaration order, a single
    assert of the matrix, then (check-sat) and optionally (get-model).
    """
    names = query.vars.names
    lines = [f"(set-logic {logic})"]
    for key, value in (info or {}).items():
        lines.append(f'(set-info :{key} "{value}")')
    for n in names:
        lines.append(f"(declare-fun {smt_symbol(n)} () Real)")
    lines.append(f"(assert {_emit_formula(query.matrix, names)})")
    lines.append("(check-sat)")
    if get_model:
        lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# S-expression reading
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _SToken:
    text: str
    line: int


SExpr = Union[_SToken, list]


def _sexpr_tokens(text: str):
    line = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch in " \t\r":
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield _SToken(ch, line)
            i += 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SmtError("unterminated quoted symbol", line=line)
            yield _SToken(text[i + 1:j], line)
            i = j + 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            if j >= n:
                raise SmtError("unterminated string", line=line)
            yield _SToken(text[i:j + 1], line)
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();|\"":
                j += 1
            yield _SToken(text[i:j], line)
            i = j


def read_sexprs(text: str) -> list[SExpr]:
    stack: list[list] = [[]]
    lines: list[int] = [1]
    for tok in _sexpr_tokens(text):
        if tok.text == "(":
            stack.append([])
            lines.append(tok.line)
        elif tok.text == ")":
            if len(stack) == 1:
                raise SmtError("unbalanced ')'", line=tok.line)
            done = stack.pop()
            lines.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SmtError("unbalanced '('", line=lines[-1])
    return stack[0]


# ---------------------------------------------------------------------------
# Script parsing
# ---------------------------------------------------------------------------

@dataclass
class ParsedScript:
    query: ExistentialQuery
    logic: str
    info: dict[str, str] = field(default_factory=dict)


_NUMERAL = re.compile(r"^\d+$")
_DECIMAL = re.compile(r"^\d+\.\d+$")


class _TermTranslator:
    """Translates SMT terms to polynomials / formulas over a fixed table."""

    def __init__(self, table: VariableTable):
        self.table = table
        self.width = len(table)

    def _head(self, e: SExpr) -> str:
        if isinstance(e, list):
            if not e or not isinstance(e[0], _SToken):
                raise SmtError("expected an operator application", line=self._line(e))
            return e[0].text
        return e.text

    @staticmethod
    def _line(e: SExpr) -> Optional[int]:
        while isinstance(e, list) and e:
            e = e[0]
        return e.line if isinstance(e, _SToken) else None

    # -- polynomial terms --------------------------------------------------

    def poly(self, e: SExpr, env: dict) -> Polynomial:
        if isinstance(e, _SToken):
            t = e.text
            if _NUMERAL.match(t):
                return Polynomial.constant(self.width, int(t))
            if _DECIMAL.match(t):
                return Polynomial.constant(self.width, Fraction(t))
            if t in env:
                bound = env[t]
                if isinstance(bound, Polynomial):
                    return bound
                raise SmtError(f"let-bound formula {t!r} used as a term", line=e.line)
            if t in self.table:
                return Polynomial.var(self.width, self.table.by_name(t).index)
            raise SmtError(f"unknown constant {t!r}", line=e.line)
        head = self._head(e)
        args = e[1:]
        if head == "+":
            acc = Polynomial.zero(self.width)
            for a in args:
                acc = acc + self.poly(a, env)
            return acc
        if head == "-":
            if len(args) == 1:
                return -self.poly(args[0], env)
            acc = self.poly(args[0], env)
            for a in args[1:]:
                acc = acc - self.poly(a, env)
            return acc
        if head == "*":
            acc = Polynomial.constant(self.width, 1)
            for a in args:
                acc = acc * self.poly(a, env)
            return acc
        if head == "/":
            if len(args) != 2:
                raise SmtError("'/' expects two arguments", line=self._line(e))
            num = self.poly(args[0], env)
            den = self.poly(args[1], env)
            if not den.is_constant():
                raise SmtError("division by a non-numeral", line=self._line(e))
            c = den.constant_value()
            if c == 0:
                raise SmtError("division by zero", line=self._line(e))
            return num.scale(Fraction(1) / c)
        if head == "let":
            return self.poly(args[1], self._let_env(args[0], env))
        raise SmtError(f"unsupported term operator {head!r}", line=self._line(e))

    # -- formulas ------------------------------------------------------------

    _CHAIN = {"<": Rel.LT, "<=": Rel.LE, "=": Rel.EQ, ">=": Rel.GE, ">": Rel.GT}

    def formula(self, e: SExpr, env: dict) -> Formula:
        if isinstance(e, _SToken):
            t = e.text
            if t == "true":
                return TRUE
            if t == "false":
                return FALSE
            if t in env:
                bound = env[t]
                if isinstance(bound, Polynomial):
                    raise SmtError(f"let-bound term {t!r} used as a formula", line=e.line)
                return bound
            raise SmtError(f"unknown Boolean constant {t!r}", line=e.line)
        head = self._head(e)
        args = e[1:]
        if head == "and":
            return conj([self.formula(a, env) for a in args])
        if head == "or":
            return disj([self.formula(a, env) for a in args])
        if head == "not":
            if len(args) != 1:
                raise SmtError("'not' expects one argument", line=self._line(e))
            return negate(self.formula(args[0], env))
        if head == "=>":
            parts = [self.formula(a, env) for a in args]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = disj([negate(p), out])
            return out
        if head in self._CHAIN:
            rel = self._CHAIN[head]
            terms = [self.poly(a, env) for a in args]
            if len(terms) < 2:
                raise SmtError(f"{head!r} expects at least two arguments", line=self._line(e))
            return conj([atom(terms[i] - terms[i + 1], rel) for i in range(len(terms) - 1)])
        if head == "distinct":
            terms = [self.poly(a, env) for a in args]
            out = []
            for i in range(len(terms)):
                for j in range(i + 1, len(terms)):
                    out.append(atom(terms[i] - terms[j], Rel.NE))
            return conj(out)
        if head == "let":
            return self.formula(args[1], self._let_env(args[0], env))
        raise SmtError(f"unsupported operator {head!r}", line=self._line(e))

    def _let_env(self, bindings: SExpr, env: dict) -> dict:
        if not isinstance(bindings, list):
            raise SmtError("malformed let binding", line=self._line(bindings))
        new_env = dict(env)
        for b in bindings:
            if not (isinstance(b, list) and len(b) == 2 and isinstance(b[0], _SToken)):
                raise SmtError("malformed let binding", line=self._line(b))
            name = b[0].text
            # A binding may denote a term or a sub-formula; try the term
            # reading first, then fall back to the Boolean one.
            try:
                new_env[name] = self.poly(b[1], env)
            except SmtError:
                new_env[name] = self.formula(b[1], env)
        return new_env


def parse_smt2(text: str) -> ParsedScript:
    """Parse a script of the supported fragment into a fully existential query.

    All asserts are conjoined; declared constants (sort Real only) form the
    variable table in declaration order and the prenex block.  Unknown
    set-info keys are collected, not rejected.
    """
    commands = read_sexprs(text)
    logic = "QF_NRA"
    info: dict[str, str] = {}
    names: list[str] = []
    asserts: list[SExpr] = []
    for cmd in commands:
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], _SToken):
            raise SmtError("expected a command list", line=_TermTranslator._line(cmd))
        head = cmd[0].text
        line = cmd[0].line
        if head == "set-logic":
            logic = cmd[1].text if len(cmd) > 1 and isinstance(cmd[1], _SToken) else logic
        elif head == "set-info":
            if len(cmd) >= 3 and isinstance(cmd[1], _SToken) and isinstance(cmd[2], _SToken):
                info[cmd[1].text.lstrip(":")] = cmd[2].text.strip('"')
        elif head in ("declare-fun", "declare-const"):
            if head == "declare-fun":
                ok = (len(cmd) == 4 and isinstance(cmd[1], _SToken)
                      and isinstance(cmd[2], list) and not cmd[2]
                      and isinstance(cmd[3], _SToken) and cmd[3].text == "Real")
            else:
                ok = (len(cmd) == 3 and isinstance(cmd[1], _SToken)
                      and isinstance(cmd[2], _SToken) and cmd[2].text == "Real")
            if not ok:
                raise SmtError("only zero-arity Real constants are supported", line=line)
            name = cmd[1].text
            if name in names:
                raise SmtError(f"constant {name!r} declared twice", line=line)
            names.append(name)
        elif head == "assert":
            if len(cmd) != 2:
                raise SmtError("'assert' expects one argument", line=line)
            asserts.append(cmd[1])
        elif head in ("check-sat", "get-model", "exit", "set-option", "get-info", "echo"):
            continue
        else:
            raise SmtError(f"unsupported command {head!r}", line=line)
    table = VariableTable(names)
    translator = _TermTranslator(table)
    matrix = conj([translator.formula(a, {}) for a in asserts])
    query = ExistentialQuery(table, tuple(range(len(table))), matrix)
    return ParsedScript(query=query, logic=logic, info=info)


# ---------------------------------------------------------------------------
# Model parsing
# ---------------------------------------------------------------------------

@dataclass
class ParsedModel:
    witness: Optional[dict[int, Fraction]]
    unparsed: list[str]  # names whose values were not rational literals


def _constant_value(e: SExpr) -> Optional[Fraction]:
    if isinstance(e, _SToken):
        t = e.text
        if _NUMERAL.match(t):
            return Fraction(int(t))
        if _DECIMAL.match(t):
            return Fraction(t)
        return None
    if not e or not isinstance(e[0], _SToken):
        return None
    head = e[0].text
    args = e[1:]
    vals = [_constant_value(a) for a in args]
    if any(v is None for v in vals):
        return None
    if head == "-" and len(vals) == 1:
        return -vals[0]
    if head == "-" and len(vals) >= 2:
        out = vals[0]
        for v in vals[1:]:
            out -= v
        return out
    if head == "+":
        return sum(vals, Fraction(0))
    if head == "*":
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if head == "/" and len(vals) == 2 and vals[1] != 0:
        return vals[0] / vals[1]
    return None


def parse_model(text: str, table: VariableTable) -> ParsedModel:
    """Extract a rational witness from solver get-model output.

    Accepts define-fun constants with numeral, decimal, negation, and
    division forms.  Algebraic root objects are reported as unparsed;
    variables the solver omitted default to zero.
    """
    try:
        exprs = read_sexprs(text)
    except SmtError:
        return ParsedModel(witness=None, unparsed=["<unreadable>"])
    defines: list[SExpr] = []

    def scan(e: SExpr) -> None:
        if isinstance(e, list):
            if e and isinstance(e[0], _SToken) and e[0].text == "define-fun":
                defines.append(e)
            else:
                for sub in e:
                    scan(sub)

    for e in exprs:
        scan(e)
    if not defines:
        return ParsedModel(witness=None, unparsed=[])
    witness = {v.index: Fraction(0) for v in table}
    unparsed: list[str] = []
    for d in defines:
        if len(d) != 5 or not isinstance(d[1], _SToken):
            continue
        name = d[1].text
        if name not in table:
            continue
        value = _constant_value(d[4])
        if value is None:
            unparsed.append(name)
        else:
            witness[table.by_name(name).index] = value
    if unparsed:
        return ParsedModel(witness=None, unparsed=unparsed)
    return ParsedModel(witness=witness, unparsed=[])


# ---------------------------------------------------------------------------
# Computer-algebra emitters (best effort, no parsers)
# ---------------------------------------------------------------------------

def _infix_poly(p: Polynomial, names: Sequence[str], power: str) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.items():
        factors = []
        for i, d in enumerate(exps):
            if d == 1:
                factors.append(names[i])
            elif d > 1:
                factors.append(f"{names[i]}{power}{d}")
        coeff = ""
        if not factors or abs(c) != 1:
            coeff = str(abs(c)) if c.denominator == 1 else f"({abs(c.numerator)}/{c.denominator})"
        body = "*".join(([coeff] if coeff else []) + factors) or "0"
        parts.append(("+ " if c > 0 else "- ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _infix_formula(f: Formula, names: Sequence[str], ops: dict, power: str) -> str:
    if f == TRUE:
        return ops["true"]
    if f == FALSE:
        return ops["false"]
    if isinstance(f, Atom):
        return f"{_infix_poly(f.lhs, names, power)} {ops[f.rel]} 0"
    if isinstance(f, Not):
        return _infix_formula(negate(f), names, ops, power)
    if isinstance(f, (And, Or)):
        op = ops["and"] if isinstance(f, And) else ops["or"]
        return "(" + f" {op} ".join(_infix_formula(c, names, ops, power) for c in f.children) + ")"
    raise TypeError(f"not a formula: {f!r}")


_REDLOG_OPS = {
    Rel.LT: "<", Rel.LE: "<=", Rel.EQ: "=", Rel.NE: "<>", Rel.GE: ">=", Rel.GT: ">",
    "and": "and", "or": "or", "true": "true", "false": "false",
}
_MAPLE_OPS = {
    Rel.LT: "<", Rel.LE: "<=", Rel.EQ: "=", Rel.NE: "<>", Rel.GE: ">=", Rel.GT: ">",
    "and": "&and", "or": "&or", "true": "true", "false": "false",
}


def emit_redlog(query: ExistentialQuery) -> str:
    names = query.vars.names
    quantified = ", ".join(names[i] for i in query.quantified)
    body = _infix_formula(query.matrix, names, _REDLOG_OPS, "**")
    return (
        "load_package redlog;\nrlset reals;\n"
        f"phi := ex({{{quantified}}}, {body});\n"
        "result := rlqe phi;\n"
    )


def emit_maple(query: ExistentialQuery) -> str:
    names = query.vars.names
    quantified = ", ".join(names[i] for i in query.quantified)
    body = _infix_formula(query.matrix, names, _MAPLE_OPS, "^")
    return (
        "with(QuantifierElimination):\n"
        f"result := QuantifierEliminate(&E([{quantified}]), {body});\n"
    )
