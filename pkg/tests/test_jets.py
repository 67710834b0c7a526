"""Taylor expansion by Newton lifting, series inversion, embeddings."""

import math
import random
from fractions import Fraction

import pytest

from varfields.errors import NotInvertibleError
from varfields.jets import (
    JetField,
    JetSeries,
    coordinate_series,
    embed_field,
    poly_at_series,
    series_invert,
    taylor_expand,
)
from varfields.variety import LocalElement, Point, chart_derivative
from varfields.vfields import VectorField, delta_field, filtration_level, truncated_lift


def binomial_sqrt_series(order):
    """Coefficients of (1 - u1^2 - u2^2)^(1/2) via the generalized
    binomial theorem; the independent oracle for the sphere expansion."""
    coeffs = {}
    for j in range(order // 2 + 1):
        c = Fraction(1)
        for k in range(j):
            c *= Fraction(1, 2) - k
        c /= math.factorial(j)
        c *= (-1) ** j
        for a in range(j + 1):
            mono = (2 * a, 2 * (j - a))
            if sum(mono) <= order:
                coeffs[mono] = coeffs.get(mono, Fraction(0)) + c * math.comb(j, a)
    return {m: c for m, c in coeffs.items() if c}


class TestSeriesArithmetic:
    def test_truncation_respected(self):
        a = JetSeries({(3, 0): Fraction(1), (0, 1): Fraction(1)}, 3, 2)
        prod = a * a
        assert all(sum(m) <= 3 for m in prod.coeffs)

    def test_partial(self):
        a = JetSeries({(2, 1): Fraction(3)}, 4, 2)
        assert a.partial(0).coeffs == {(1, 1): Fraction(6)}

    def test_ring_laws(self):
        rng = random.Random(0)

        def rand():
            return JetSeries(
                {
                    (rng.randint(0, 2), rng.randint(0, 2)): Fraction(rng.randint(-3, 3))
                    for _ in range(3)
                },
                4,
                2,
            )

        for _ in range(10):
            a, b, c = rand(), rand(), rand()
            assert (a + b) * c == a * c + b * c
            assert a * b == b * a


class TestInvert:
    def test_identity(self):
        one = JetSeries.constant(1, 3, 2)
        assert series_invert(one) == one

    def test_shifted_geometric(self):
        a = JetSeries({(0, 0): Fraction(2), (2, 0): Fraction(-1), (0, 2): Fraction(-1)}, 2, 2)
        inv = series_invert(a)
        assert inv.coeffs == {
            (0, 0): Fraction(1, 2),
            (2, 0): Fraction(1, 4),
            (0, 2): Fraction(1, 4),
        }

    def test_geometric(self):
        a = JetSeries({(0,): Fraction(1), (1,): Fraction(1)}, 3, 1)
        assert series_invert(a).coeffs == {
            (0,): Fraction(1),
            (1,): Fraction(-1),
            (2,): Fraction(1),
            (3,): Fraction(-1),
        }

    def test_zero_constant_term(self):
        a = JetSeries({(1,): Fraction(1)}, 3, 1)
        with pytest.raises(NotInvertibleError):
            series_invert(a)

    def test_product_is_one(self):
        rng = random.Random(5)
        for _ in range(8):
            coeffs = {
                (rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-4, 4))
                for _ in range(4)
            }
            coeffs[(0, 0)] = Fraction(rng.randint(1, 5))
            a = JetSeries(coeffs, 5, 2)
            assert a * series_invert(a) == JetSeries.constant(1, 5, 2)


class TestNewtonExpansion:
    def test_sphere_z_series_matches_binomial_oracle(self, sphere, sphere_point):
        for order in (2, 4, 6):
            series = taylor_expand(
                sphere.element("z"), sphere.chart(2), sphere_point, order
            )
            assert series.coeffs == binomial_sqrt_series(order)

    def test_chart_parameter_expands_to_itself(self, sphere, sphere_point):
        series = taylor_expand(sphere.element("x"), sphere.chart(2), sphere_point, 4)
        assert series.coeffs == {(1, 0): Fraction(1)}

    def test_vanishing_function_has_no_constant_term(self, sphere, sphere_point):
        tbar = sphere_point.shifted_parameter(1)
        series = taylor_expand(tbar * tbar, sphere.chart(2), sphere_point, 5)
        assert series.constant_term() == 0

    def test_generator_certificate(self, sphere, circle):
        from varfields.catalog import base_point

        for name, v in (("sphere", sphere), ("circle", circle)):
            p = base_point(name)
            amb = coordinate_series(p.chart, p, 6)
            for g in v.generators:
                assert poly_at_series(g, amb, 6).is_zero()

    def test_off_center_point(self, sphere):
        p = Point(sphere.chart(2), [Fraction(3, 13), Fraction(4, 13), Fraction(12, 13)])
        series = taylor_expand(sphere.element("z"), sphere.chart(2), p, 4)
        assert series.constant_term() == Fraction(12, 13)
        amb = coordinate_series(p.chart, p, 4)
        for g in sphere.generators:
            assert poly_at_series(g, amb, 4).is_zero()

    def test_ring_homomorphism(self, sphere, sphere_point):
        rng = random.Random(7)
        chart = sphere.chart(2)
        for _ in range(8):
            terms_a = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(2)}
            terms_b = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(2)}
            f = sphere.ideal.element(sphere.ring.poly(terms_a))
            g = sphere.ideal.element(sphere.ring.poly(terms_b))
            ef = taylor_expand(f, chart, sphere_point, 5)
            eg = taylor_expand(g, chart, sphere_point, 5)
            efg = taylor_expand(f * g, chart, sphere_point, 5)
            assert efg == ef * eg

    def test_localized_expansion(self, sphere, sphere_point):
        chart = sphere.chart(2)
        inv2z = LocalElement(chart, sphere.element(1), 1)  # 1/(2z)
        series = taylor_expand(inv2z, chart, sphere_point, 2)
        assert series.coeffs == {
            (0, 0): Fraction(1, 2),
            (2, 0): Fraction(1, 4),
            (0, 2): Fraction(1, 4),
        }

    def test_consistency_with_chart_derivative(self, sphere, sphere_point):
        rng = random.Random(13)
        chart = sphere.chart(2)
        for _ in range(6):
            terms = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(2)}
            f = LocalElement(chart, sphere.ideal.element(sphere.ring.poly(terms)), rng.randint(0, 1))
            i = rng.randrange(2)
            lhs = taylor_expand(chart_derivative(f, i, chart), chart, sphere_point, 4)
            rhs = taylor_expand(f, chart, sphere_point, 5).partial(i)
            assert lhs.agrees_to_order(rhs, 4)


class TestEmbedField:
    def test_line_euler_field(self, line, line_point):
        t_ddt = VectorField(line, [line.ring.gen(0)])
        jet = embed_field(t_ddt, line.chart(0), line_point, 4)
        assert jet.components[0].coeffs == {(1,): Fraction(1)}
        assert jet.min_degree() == 0

    def test_sphere_rotation(self, sphere, sphere_point):
        d12 = delta_field(sphere, 0, 1) * Fraction(1, 2)
        jet = embed_field(d12, sphere.chart(2), sphere_point, 4)
        assert jet.components[0].coeffs == {(0, 1): Fraction(1)}
        assert jet.components[1].coeffs == {(1, 0): Fraction(-1)}

    def test_lift_embedding_is_near_identity(self, sphere, sphere_point):
        chart = sphere.chart(2)
        for order in range(0, 4):
            eta = truncated_lift(chart, sphere_point, 1, order)
            jet = embed_field(eta, chart, sphere_point, order + 2)
            delta = jet - JetField(
                [
                    JetSeries.constant(0, order + 2, 2),
                    JetSeries.constant(1, order + 2, 2),
                ]
            )
            md = delta.min_degree()
            assert md is None or md > order - 1

    def test_bracket_compatibility(self, sphere, sphere_point):
        rng = random.Random(21)
        chart = sphere.chart(2)
        fields = [delta_field(sphere, i, j) for i, j in [(0, 1), (1, 2), (2, 0)]]
        for _ in range(6):
            a = rng.choice(fields) * sphere.element(rng.randint(1, 2))
            b = rng.choice(fields)
            order = 5
            ja = embed_field(a, chart, sphere_point, order)
            jb = embed_field(b, chart, sphere_point, order)
            jbr = embed_field(a.bracket(b), chart, sphere_point, order)
            assert jbr.agrees_to_order(ja.bracket(jb), order - 1)

    def test_filtration_matches_min_degree(self, sphere, sphere_point):
        rng = random.Random(8)
        fields = [delta_field(sphere, i, j) for i, j in [(0, 1), (1, 2), (2, 0)]]
        for _ in range(8):
            eta = rng.choice(fields) * sphere_point.shifted_parameter(rng.randrange(2)) ** rng.randint(0, 2)
            jet = embed_field(eta, sphere.chart(2), sphere_point, 8)
            md = jet.min_degree()
            if md is not None:
                assert filtration_level(eta, sphere_point) == md


class TestPrinting:
    def test_order_marker(self, sphere, sphere_point):
        series = taylor_expand(sphere.element("z"), sphere.chart(2), sphere_point, 2)
        assert str(series) == "1 - 1/2*u1^2 - 1/2*u2^2 + O(3)"
