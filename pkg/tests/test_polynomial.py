"""Polynomial arithmetic: ring axioms, structure queries, evaluation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from econqe.polynomial import Polynomial, Variable, VariableTable


W = 3


def P(c):
    return Polynomial.constant(W, c)


def V(i):
    return Polynomial.var(W, i)


coefficients = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6
)


@st.composite
def polynomials(draw, width=W, max_terms=5, max_degree=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in range(width))
        terms[exps] = draw(coefficients)
    return Polynomial(width, terms)


class TestTable:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            VariableTable(["a", "a"])

    def test_suggested_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            VariableTable(["a", "b"], suggested_order=[0])
        t = VariableTable(["a", "b"], suggested_order=[1, 0])
        assert t.suggested_order == (1, 0)

    def test_lookup(self):
        t = VariableTable(["p", "q"])
        assert t.by_name("q") == Variable("q", 1)
        with pytest.raises(KeyError):
            t.by_name("r")


class TestArithmetic:
    def test_zero_terms_dropped(self):
        p = V(0) - V(0)
        assert p.is_zero()
        assert not p.items()

    def test_marshall_equality_polynomial(self):
        # v3*v2 - 1 - v4 at (v2, v3, v4 reindexed 0,1,2)
        p = V(1) * V(0) - P(1) - V(2)
        assert p.total_degree() == 2
        assert p.degree_in(0) == 1
        pt = {0: Fraction(1), 1: Fraction(1, 2), 2: Fraction(-1, 2)}
        assert p.evaluate(pt) == 0

    def test_pow(self):
        p = (V(0) + P(1)) ** 3
        assert p.evaluate({0: Fraction(2), 1: Fraction(0), 2: Fraction(0)}) == 27
        assert (V(0) ** 0) == P(1)
        with pytest.raises(ValueError):
            V(0) ** -1

    @given(polynomials(), polynomials(), polynomials())
    @settings(max_examples=200, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == Polynomial.zero(W)
        assert a * b == b * a

    @given(polynomials())
    @settings(max_examples=100, deadline=None)
    def test_primitive_content(self, p):
        prim = p.primitive()
        if not p.is_zero():
            assert prim.content() == 1
            # primitive part has integer coprime coefficients
            assert all(c.denominator == 1 for _, c in prim.items())


class TestStructure:
    def test_degrees_and_variables(self):
        p = V(2) ** 2 * V(1)  # v3^2 * v2 in the spec's example
        assert p.degree_in(2) == 2
        assert p.total_degree() == 3
        assert p.variables() == frozenset({1, 2})

    def test_common_monomial_division(self):
        p = V(0) ** 2 * V(1) + V(0) ** 3
        assert p.common_monomial() == (2, 0, 0)
        q = p.divide_monomial((2, 0, 0))
        assert q == V(1) + V(0)

    def test_coefficients_in(self):
        p = V(0) ** 2 * V(1) + V(0).scale(2) + P(7)
        c0, c1, c2 = p.coefficients_in(0)
        assert c0 == P(7)
        assert c1 == P(2)
        assert c2 == V(1)

    def test_substitute(self):
        p = V(0) ** 2 + V(1)
        q = p.substitute(0, V(1) + P(1))
        pt = {0: Fraction(9), 1: Fraction(2), 2: Fraction(0)}
        assert q.evaluate(pt) == (2 + 1) ** 2 + 2

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Polynomial.var(2, 0) + Polynomial.var(3, 0)


class TestRendering:
    def test_to_string(self):
        p = V(0) * V(1).scale(2) - P(Fraction(1, 2))
        s = p.to_string(["x", "y", "z"])
        assert s == "2*x*y - 1/2"
