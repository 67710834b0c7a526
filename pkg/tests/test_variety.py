"""Varieties, charts, localized elements and chart derivatives."""

import random
from fractions import Fraction

import pytest

from varfields.errors import (
    EmptyVarietyError,
    PointNotOnVarietyError,
    SingularChartError,
)
from varfields.variety import (
    LocalElement,
    Point,
    build_variety,
    chart_derivative,
    local_parameter_check,
)


class TestBuildVariety:
    def test_sphere_structure(self, sphere):
        assert sphere.n == 3
        assert sphere.rank == 1
        assert sphere.dim == 2
        jac = [str(e) for e in sphere.jacobian[0]]
        assert jac == ["2*x", "2*y", "2*z"]

    def test_affine_line(self, line):
        assert (line.n, line.rank, line.dim) == (1, 0, 1)
        atlas = line.standard_atlas()
        assert len(atlas) == 1 and atlas[0].h == 1

    def test_circle_minors(self, circle):
        assert circle.rank == 1 and circle.dim == 1
        minors = [str(c.h) for c in circle.standard_atlas()]
        assert minors == ["2*x", "2*y"]

    def test_empty_variety(self):
        with pytest.raises(EmptyVarietyError):
            build_variety(["x^2 + 1", "x"], variables=["x"])

    def test_two_generator_rank(self):
        # intersection of the sphere with a plane: rank 2, a curve
        v = build_variety(["x^2 + y^2 + z^2 - 1", "z"], variables=["x", "y", "z"])
        assert v.rank == 2
        assert v.dim == 1


class TestAtlas:
    def test_sphere_charts(self, sphere):
        atlas = sphere.standard_atlas()
        assert [c.param_names() for c in atlas] == [("y", "z"), ("x", "z"), ("x", "y")]

    def test_circle_charts(self, circle):
        atlas = circle.standard_atlas()
        assert [c.param_names() for c in atlas] == [("y",), ("x",)]

    def test_chart_json(self, sphere):
        data = sphere.chart(2).to_json()
        assert data["minor"] == "2*z"
        assert data["parameters"] == ["x", "y"]


class TestPoints:
    def test_north_pole(self, sphere):
        p = Point(sphere.chart(2), [0, 0, 1])
        assert p.h_value == 2

    def test_point_not_on_variety(self, sphere):
        with pytest.raises(PointNotOnVarietyError):
            Point(sphere.chart(2), [1, 1, 1])

    def test_point_outside_chart(self, sphere):
        with pytest.raises(SingularChartError):
            Point(sphere.chart(2), [Fraction(3, 5), Fraction(4, 5), 0])


class TestLocalElements:
    def test_minor_power_strips(self, sphere):
        chart = sphere.chart(2)
        z2 = chart.local(sphere.element("4*z^2"), 1)  # (4z^2)/(2z) = 2z
        assert z2.power == 0
        assert z2.num == sphere.element("2*z")

    def test_cross_multiplication_equality(self, sphere):
        chart = sphere.chart(2)
        a = chart.local(sphere.element("x"), 0)
        b = LocalElement(chart, sphere.element("x") * chart.h, 1)
        assert a == b

    def test_arithmetic_consistency(self, sphere):
        chart = sphere.chart(2)
        rng = random.Random(3)

        def rand_local():
            terms = {}
            for _ in range(3):
                mono = tuple(rng.randint(0, 2) for _ in range(3))
                terms[mono] = Fraction(rng.randint(-3, 3))
            num = sphere.ideal.element(sphere.ring.poly(terms))
            return LocalElement(chart, num, rng.randint(0, 2))

        for _ in range(15):
            a, b, c = rand_local(), rand_local(), rand_local()
            assert (a + b) * c == a * c + b * c
            assert a * b == b * a
            assert (a - a).is_zero()

    def test_evaluate(self, sphere):
        chart = sphere.chart(2)
        e = LocalElement(chart, sphere.element("x + 1"), 1)
        assert e.evaluate([0, 0, 1]) == Fraction(1, 2)


class TestChartDerivative:
    def test_implicit_derivative(self, sphere):
        # dz/dx = -x/z on the chart with parameters (x, y)
        chart = sphere.chart(2)
        dz = chart.coordinate_derivatives()[0][2]
        assert dz == LocalElement(chart, sphere.element("-2*x"), 1)

    def test_parameter_derivative(self, sphere):
        chart = sphere.chart(2)
        dx = chart.coordinate_derivatives()[0][0]
        assert dx == chart.one()

    def test_chain_rule_z_squared(self, sphere):
        chart = sphere.chart(2)
        d = chart_derivative(sphere.element("z^2"), 0, chart)
        assert d == chart.local(sphere.element("-2*x"))
        # consistency: z^2 = 1 - x^2 - y^2 in the quotient ring
        alt = chart_derivative(sphere.element("1 - x^2 - y^2"), 0, chart)
        assert d == alt

    def test_generators_are_annihilated(self, sphere, circle):
        for v in (sphere, circle):
            for chart in v.standard_atlas():
                for g in v.generators:
                    for i in range(chart.s):
                        assert chart_derivative(v.ideal.element(g), i, chart).is_zero()

    def test_leibniz_rule(self, sphere):
        chart = sphere.chart(2)
        rng = random.Random(11)
        for _ in range(10):
            terms_a = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(2)}
            terms_b = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(2)}
            f = LocalElement(chart, sphere.ideal.element(sphere.ring.poly(terms_a)), rng.randint(0, 1))
            g = LocalElement(chart, sphere.ideal.element(sphere.ring.poly(terms_b)), rng.randint(0, 1))
            i = rng.randrange(2)
            lhs = chart_derivative(f * g, i, chart)
            rhs = f * chart_derivative(g, i, chart) + g * chart_derivative(f, i, chart)
            assert lhs == rhs

    def test_derivatives_commute(self, sphere):
        chart = sphere.chart(2)
        rng = random.Random(4)
        for _ in range(8):
            terms = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-3, 3)) for _ in range(3)}
            f = LocalElement(chart, sphere.ideal.element(sphere.ring.poly(terms)), rng.randint(0, 1))
            d01 = chart_derivative(chart_derivative(f, 0, chart), 1, chart)
            d10 = chart_derivative(chart_derivative(f, 1, chart), 0, chart)
            assert d01 == d10


class TestLocalParameters:
    def test_north_pole(self, sphere, sphere_point):
        assert local_parameter_check(sphere.chart(2), sphere_point)

    def test_rejects_point_outside_chart(self, sphere):
        with pytest.raises(SingularChartError):
            local_parameter_check(sphere.chart(2), [Fraction(3, 5), Fraction(4, 5), 0])

    def test_affine_plane(self, plane):
        assert local_parameter_check(plane.chart(0), [Fraction(1), Fraction(-2)])

    def test_interior_point(self, sphere):
        p = Point(sphere.chart(2), [Fraction(3, 13), Fraction(4, 13), Fraction(12, 13)])
        assert local_parameter_check(sphere.chart(2), p)
