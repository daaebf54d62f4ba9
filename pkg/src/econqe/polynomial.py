"""Sparse multivariate polynomials with exact rational coefficients.

Everything downstream (atoms, virtual substitution, witness checking) rests
on this module.  Coefficients are `fractions.Fraction` throughout: corpus
answers are certificates and floating point would invalidate them.

A polynomial is stored as a map from exponent vectors to nonzero
coefficients.  Exponent vectors are tuples whose length equals the size of
the owning variable table, so polynomials from the same table can be
combined without remapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

RationalLike = Union[Fraction, int, str]


def rational(x: RationalLike) -> Fraction:
    """Coerce ints, strings like '1/2', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class Variable:
    """A named real variable with its dense index in a table."""

    name: str
    index: int

    def __repr__(self) -> str:
        return f"Variable({self.name!r}, {self.index})"


class VariableTable:
    """Ordered collection of variables; owns the exponent-vector layout.

    May carry a suggested elimination order (a permutation of indices),
    as shipped with some benchmark files.
    """

    def __init__(self, names: Sequence[str], suggested_order: Optional[Sequence[int]] = None):
        seen = set()
        for n in names:
            if n in seen:
                raise ValueError(f"duplicate variable name {n!r}")
            seen.add(n)
        self._vars = tuple(Variable(n, i) for i, n in enumerate(names))
        self._by_name = {v.name: v for v in self._vars}
        if suggested_order is not None:
            order = tuple(suggested_order)
            if sorted(order) != list(range(len(self._vars))):
                raise ValueError("suggested order is not a permutation of all indices")
            self.suggested_order: Optional[tuple[int, ...]] = order
        else:
            self.suggested_order = None

    def __len__(self) -> int:
        return len(self._vars)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._vars)

    def __getitem__(self, index: int) -> Variable:
        return self._vars[index]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VariableTable):
            return NotImplemented
        return (
            tuple(v.name for v in self._vars) == tuple(v.name for v in other._vars)
            and self.suggested_order == other.suggested_order
        )

    def __hash__(self) -> int:
        return hash(tuple(v.name for v in self._vars))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self._vars)

    def by_name(self, name: str) -> Variable:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"undeclared variable {name!r}") from None

    def variable(self, x: Union[Variable, str, int]) -> Variable:
        if isinstance(x, Variable):
            return x
        if isinstance(x, str):
            return self.by_name(x)
        return self._vars[x]


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial over a fixed variable-table width.

    Terms are kept in canonical graded-lexicographic order (total degree
    first, then exponent vector).  No stored coefficient is zero.
    """

    __slots__ = ("_width", "_terms", "_hash")

    def __init__(self, width: int, terms: Mapping[tuple[int, ...], Fraction]):
        cleaned = {}
        for exps, c in terms.items():
            if c == 0:
                continue
            if len(exps) != width:
                raise ValueError(f"exponent vector {exps} has wrong length for width {width}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            cleaned[tuple(exps)] = Fraction(c)
        self._width = width
        # descending graded-lex: leading term first
        self._terms = tuple(sorted(cleaned.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        self._hash: Optional[int] = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(width: int) -> "Polynomial":
        return Polynomial(width, {})

    @staticmethod
    def constant(width: int, c: RationalLike) -> "Polynomial":
        return Polynomial(width, {(0,) * width: rational(c)})

    @staticmethod
    def var(width: int, index: int, power: int = 1) -> "Polynomial":
        exps = [0] * width
        exps[index] = power
        return Polynomial(width, {tuple(exps): Fraction(1)})

    # -- basic protocol ------------------------------------------------

    @property
    def width(self) -> int:
        return self._width

    def items(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and sum(self._terms[0][0]) == 0)

    def constant_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms[0][1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._width == other._width and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._width, self._terms))
        return self._hash

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._width != self._width:
                raise ValueError("polynomials belong to different variable tables")
            return other
        return Polynomial.constant(self._width, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc = dict(self._terms)
        for exps, c in other._terms:
            acc[exps] = acc.get(exps, Fraction(0)) + c
        return Polynomial(self._width, acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self._width, {e: -c for e, c in self._terms})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        acc: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self._width, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self._width, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: RationalLike) -> "Polynomial":
        c = rational(c)
        return Polynomial(self._width, {e: k * c for e, k in self._terms})

    # -- structure -----------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return sum(self._terms[0][0])

    def degree_in(self, index: int) -> int:
        """Maximum exponent of one variable; 0 if absent, -1 for zero poly."""
        if not self._terms:
            return -1
        return max(e[index] for e, _ in self._terms)

    def variables(self) -> frozenset[int]:
        """Indices of variables that actually occur."""
        occ = set()
        for e, _ in self._terms:
            for i, d in enumerate(e):
                if d:
                    occ.add(i)
        return frozenset(occ)

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[0][1]

    def content(self) -> Fraction:
        """Positive content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for _, c in self._terms:
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Divide by the positive content (integer coprime coefficients)."""
        c = self.content()
        if c in (0, 1):
            return self
        return self.scale(1 / c)

    def coefficients_in(self, index: int) -> list["Polynomial"]:
        """Coefficients [g_0, ..., g_d] of self viewed as a poly in one variable."""
        d = max(0, self.degree_in(index))
        buckets: list[dict[tuple[int, ...], Fraction]] = [dict() for _ in range(d + 1)]
        for e, c in self._terms:
            k = e[index]
            reduced = e[:index] + (0,) + e[index + 1:]
            buckets[k][reduced] = buckets[k].get(reduced, Fraction(0)) + c
        return [Polynomial(self._width, b) for b in buckets]

    def common_monomial(self) -> tuple[int, ...]:
        """Exponent-wise minimum over all terms; all zeros for the zero poly."""
        if not self._terms:
            return (0,) * self._width
        mins = list(self._terms[0][0])
        for e, _ in self._terms[1:]:
            for i, d in enumerate(e):
                if d < mins[i]:
                    mins[i] = d
        return tuple(mins)

    def divide_monomial(self, mono: tuple[int, ...]) -> "Polynomial":
        """Exact division by a monomial that divides every term."""
        out = {}
        for e, c in self._terms:
            reduced = tuple(a - b for a, b in zip(e, mono))
            if any(d < 0 for d in reduced):
                raise ValueError("monomial does not divide every term")
            out[reduced] = c
        return Polynomial(self._width, out)

    def evaluate(self, point: Mapping[int, Fraction]) -> Fraction:
        """Exact value at a full rational point (keyed by variable index)."""
        total = Fraction(0)
        for e, c in self._terms:
            v = c
            for i, d in enumerate(e):
                if d:
                    v *= point[i] ** d
            total += v
        return total

    def substitute(self, index: int, replacement: "Polynomial") -> "Polynomial":
        """Substitute a polynomial for one variable."""
        coeffs = self.coefficients_in(index)
        result = Polynomial.zero(self._width)
        power = Polynomial.constant(self._width, 1)
        for g in coeffs:
            result = result + g * power
            power = power * replacement
        return result

    # -- rendering -------------------------------------------------------

    def to_string(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            factors = []
            for i, d in enumerate(e):
                if d == 1:
                    factors.append(names[i])
                elif d > 1:
                    factors.append(f"{names[i]}^{d}")
            if not factors:
                parts.append(("+ " if c > 0 else "- ") + str(abs(c)))
                continue
            mon = "*".join(factors)
            if abs(c) == 1:
                parts.append(("+ " if c > 0 else "- ") + mon)
            else:
                parts.append(("+ " if c > 0 else "- ") + f"{abs(c)}*{mon}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        return f"Polynomial<{self.to_string([f'x{i}' for i in range(self._width)])}>"
