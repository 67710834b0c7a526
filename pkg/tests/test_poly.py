"""Exact polynomial arithmetic, orders, parsing and evaluation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varfields.errors import ParseError, StructuralError
from varfields.poly import MonomialOrder, PolyRing, parse_polynomial

R3 = PolyRing(["x", "y", "z"])
X, Y, Z = R3.gens()


def rationals():
    return st.builds(
        Fraction, st.integers(-50, 50), st.integers(1, 9)
    )


@st.composite
def polys(draw, ring=R3, max_degree=4, max_terms=5):
    p = ring.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        mono = [0] * ring.nvars
        for _ in range(draw(st.integers(0, max_degree))):
            mono[draw(st.integers(0, ring.nvars - 1))] += 1
        p = p + ring.monomial(mono, draw(rationals()))
    return p


class TestArithmetic:
    def test_difference_of_squares(self):
        assert (X + Y) * (X - Y) == X**2 - Y**2

    def test_additive_identity(self):
        p = R3.from_string("3*x^2*y - z + 1/2")
        assert p + R3.zero() == p

    def test_self_cancellation(self):
        g = X**2 + Y**2 + Z**2 - 1
        assert (g - g).is_zero()

    def test_ring_mismatch(self):
        other = PolyRing(["x", "y"])
        with pytest.raises(StructuralError):
            X + other.gen(0)

    @given(polys(), polys(), polys())
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c

    @given(polys(), st.integers(0, 4))
    @settings(max_examples=30, deadline=None)
    def test_power_is_iterated_product(self, p, n):
        expected = R3.one()
        for _ in range(n):
            expected = expected * p
        assert p**n == expected


class TestDerivative:
    def test_power_rule(self):
        g = X**2 + Y**2 + Z**2 - 1
        assert g.partial_derivative(0) == 2 * X
        assert g.partial_derivative(2) == 2 * Z

    def test_constant_in_x(self):
        assert (Y**3).partial_derivative(0).is_zero()

    @given(polys(), polys(), st.integers(0, 2))
    @settings(max_examples=40, deadline=None)
    def test_leibniz(self, a, b, i):
        lhs = (a * b).partial_derivative(i)
        rhs = a.partial_derivative(i) * b + a * b.partial_derivative(i)
        assert lhs == rhs


class TestEvaluate:
    def test_point_on_sphere(self):
        g = X**2 + Y**2 + Z**2 - 1
        assert g.evaluate([0, 0, 1]) == 0

    def test_direct_substitution(self):
        assert (2 * Z).evaluate([0, 0, 1]) == 2

    def test_hand_evaluation(self):
        # x - x y^2 - x z^2 at (3/5, 4/5, 0): 3/5 * (1 - 16/25) = 27/125
        p = R3.from_string("x - x*y^2 - x*z^2")
        assert p.evaluate([Fraction(3, 5), Fraction(4, 5), 0]) == Fraction(27, 125)

    @given(polys(), polys())
    @settings(max_examples=40, deadline=None)
    def test_evaluation_is_a_homomorphism(self, a, b):
        pt = [Fraction(1, 2), Fraction(-2, 3), Fraction(3)]
        assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
        assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


class TestOrders:
    def test_grevlex_leading(self):
        # with x > y > z the leading monomial of x^2 + x*y^2 + z^3 is x*y^2
        p = X**2 + X * Y**2 + Z**3
        assert p.leading_monomial() == (1, 2, 0)

    def test_grevlex_tie_break(self):
        # equal degree: the one with smaller exponent in the last variable wins
        p = X * Z + Y**2
        assert p.leading_monomial() == (0, 2, 0)

    def test_lex(self):
        ring = PolyRing(["x", "y", "z"], "lex")
        p = ring.from_string("y^5 + x*z")
        assert p.leading_monomial() == (1, 0, 1)

    def test_priority_permutation(self):
        # priority z > y > x makes z^2 beat x^2 in grevlex
        ring = PolyRing(["x", "y", "z"], MonomialOrder("grevlex", priority=(2, 1, 0)))
        p = ring.from_string("x^2 + z^2")
        assert p.leading_monomial() == (0, 0, 2)

    def test_multiplicative(self):
        order = R3.order
        a, b, c = (1, 2, 0), (0, 1, 3), (2, 0, 1)
        if order.key(a) > order.key(b):
            ac = tuple(x + y for x, y in zip(a, c))
            bc = tuple(x + y for x, y in zip(b, c))
            assert order.key(ac) > order.key(bc)


class TestParsePrint:
    def test_round_trip(self):
        text = "3/2*x^2*y - z + 1"
        p = R3.from_string(text)
        assert R3.from_string(str(p)) == p

    def test_whitespace_insensitive(self):
        assert R3.from_string("x ^ 2+y^2   + z^2-1") == X**2 + Y**2 + Z**2 - 1

    def test_canonical_order_in_print(self):
        p = R3.from_string("1 + x^3 + y")
        assert str(p) == "x^3 + y + 1"

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            R3.from_string("w + 1")

    def test_empty(self):
        with pytest.raises(ParseError):
            R3.from_string("   ")

    @given(polys())
    @settings(max_examples=40, deadline=None)
    def test_round_trip_random(self, p):
        assert parse_polynomial(R3, str(p)) == p
