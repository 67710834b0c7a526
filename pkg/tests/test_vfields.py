"""Vector fields: membership, brackets, constructors, filtration, lifts."""

import random
from fractions import Fraction

import pytest

from varfields.errors import StructuralError, UnsupportedConstructorError
from varfields.jets import embed_field
from varfields.variety import Point
from varfields.vfields import (
    VectorField,
    chart_basic_field,
    delta_field,
    filtration_level,
    is_vector_field,
    parse_vector_field,
    truncated_lift,
)


class TestMembership:
    def test_rotation_field_is_member(self, sphere):
        coeffs = [sphere.element("y"), sphere.element("-x"), sphere.element(0)]
        assert is_vector_field(coeffs, sphere)

    def test_coordinate_field_is_not(self, sphere):
        coeffs = [sphere.element(1), sphere.element(0), sphere.element(0)]
        assert not is_vector_field(coeffs, sphere)

    def test_zero_field(self, sphere, line):
        for v in (sphere, line):
            assert is_vector_field([v.element(0)] * v.n, v)

    def test_constructor_rejects_nonmember(self, sphere):
        with pytest.raises(StructuralError):
            VectorField(sphere, [1, 0, 0])


class TestBracket:
    def test_sphere_rotation_bracket(self, sphere):
        d12 = delta_field(sphere, 0, 1) * Fraction(1, 2)
        d23 = delta_field(sphere, 1, 2) * Fraction(1, 2)
        d31 = delta_field(sphere, 2, 0) * Fraction(1, 2)
        # coefficient-wise bracket oracle: [D12, D23] = D31
        assert d12.bracket(d23) == d31

    def test_antisymmetry(self, sphere):
        eta = delta_field(sphere, 0, 1) * sphere.element("x*y - z")
        assert eta.bracket(eta).is_zero()

    def test_line_bracket(self, line):
        t = line.ring.gen(0)
        ddt = VectorField(line, [line.ring.one()])
        t_ddt = VectorField(line, [t])
        assert ddt.bracket(t_ddt) == ddt

    def test_leibniz_module_law(self, sphere):
        rng = random.Random(2)
        base = [delta_field(sphere, i, j) for i, j in [(0, 1), (1, 2), (2, 0)]]
        for _ in range(10):
            a = rng.choice(base) * sphere.element(rng.randint(1, 3))
            b = rng.choice(base)
            terms = {tuple(rng.randint(0, 2) for _ in range(3)): Fraction(rng.randint(-2, 2)) for _ in range(2)}
            f = sphere.ideal.element(sphere.ring.poly(terms))
            assert a.bracket(b * f) == b * a.apply(f) + a.bracket(b) * f

    def test_closure(self, sphere, circle):
        for v in (sphere, circle):
            fields = [delta_field(v, i, j) for i in range(v.n) for j in range(i + 1, v.n)]
            for a in fields:
                for b in fields:
                    assert is_vector_field(a.bracket(b).coeffs, v)


class TestDeltaFields:
    def test_sphere_delta(self, sphere):
        d = delta_field(sphere, 0, 1)
        assert [str(c) for c in d.coeffs] == ["2*y", "-2*x", "0"]

    def test_delta_diagonal_is_zero(self, sphere):
        assert delta_field(sphere, 1, 1).is_zero()

    def test_circle_delta(self, circle):
        d = delta_field(circle, 0, 1)
        assert is_vector_field(d.coeffs, circle)
        assert [str(c) for c in d.coeffs] == ["2*y", "-2*x"]

    def test_relation(self, sphere):
        # x1 D23 + x2 D31 + x3 D12 = 0
        total = (
            delta_field(sphere, 1, 2) * sphere.element("x")
            + delta_field(sphere, 2, 0) * sphere.element("y")
            + delta_field(sphere, 0, 1) * sphere.element("z")
        )
        assert total.is_zero()

    def test_non_hypersurface_rejected(self, plane):
        with pytest.raises(UnsupportedConstructorError):
            delta_field(plane, 0, 1)


class TestChartBasicFields:
    def test_sphere_chart_field(self, sphere):
        chart = sphere.chart(2)
        eta = chart_basic_field(chart, 0)
        assert [str(c) for c in eta.coeffs] == ["2*z", "0", "-2*x"]
        assert is_vector_field(eta.coeffs, sphere)
        coeffs = eta.chart_coefficients(chart)
        assert coeffs[0] == chart.local(chart.h)
        assert coeffs[1].is_zero()

    def test_affine_chart_field(self, plane):
        eta = chart_basic_field(plane.chart(0), 1)
        assert [str(c) for c in eta.coeffs] == ["0", "1"]

    def test_circle_chart_field(self, circle):
        chart = circle.chart(1)  # N(2y), parameter x
        eta = chart_basic_field(chart, 0)
        assert [str(c) for c in eta.coeffs] == ["2*y", "-2*x"]
        assert is_vector_field(eta.coeffs, circle)

    def test_all_catalog_charts(self, sphere, circle):
        for v in (sphere, circle):
            for chart in v.standard_atlas():
                for i in range(chart.s):
                    assert is_vector_field(chart_basic_field(chart, i).coeffs, v)


class TestJacobi:
    def test_random_triples(self, sphere):
        rng = random.Random(9)
        base = [delta_field(sphere, i, j) for i, j in [(0, 1), (1, 2), (2, 0)]]
        base += [chart_basic_field(sphere.chart(2), i) for i in range(2)]
        for _ in range(12):
            def pick():
                terms = {tuple(rng.randint(0, 1) for _ in range(3)): Fraction(rng.randint(-2, 2)) for _ in range(2)}
                return rng.choice(base) * sphere.ideal.element(sphere.ring.poly(terms))

            a, b, c = pick(), pick(), pick()
            jac = a.bracket(b).bracket(c) + b.bracket(c).bracket(a) + c.bracket(a).bracket(b)
            assert jac.is_zero()


class TestFiltration:
    def test_rotation_level_zero(self, sphere, sphere_point):
        d12 = delta_field(sphere, 0, 1) * Fraction(1, 2)
        assert filtration_level(d12, sphere_point) == 0

    def test_line_levels(self, line, line_point):
        t = line.ring.gen(0)
        assert filtration_level(VectorField(line, [line.ring.one()]), line_point) == -1
        assert filtration_level(VectorField(line, [t**2]), line_point) == 1

    def test_zero_field_capped(self, line, line_point):
        zero = VectorField(line, [line.ring.zero()])
        assert filtration_level(zero, line_point, cap=7) == 7

    def test_ideal_multiple_raises_level(self, sphere, sphere_point):
        eta = delta_field(sphere, 1, 2)
        base = filtration_level(eta, sphere_point)
        tbar = sphere_point.shifted_parameter(0)
        lifted = filtration_level(eta * (tbar * tbar), sphere_point)
        assert lifted >= base + 2

    def test_bracket_filtration(self, sphere, sphere_point):
        rng = random.Random(1)
        fields = [delta_field(sphere, i, j) for i, j in [(0, 1), (1, 2), (2, 0)]]
        for _ in range(8):
            a = rng.choice(fields) * sphere_point.shifted_parameter(rng.randrange(2))
            b = rng.choice(fields)
            la, lb = filtration_level(a, sphere_point), filtration_level(b, sphere_point)
            br = a.bracket(b)
            if not br.is_zero():
                assert filtration_level(br, sphere_point) >= la + lb


class TestTruncatedLift:
    def test_affine_exact(self, plane):
        p = Point(plane.chart(0), [0, 0])
        eta = truncated_lift(plane.chart(0), p, 0, 3)
        assert [str(c) for c in eta.coeffs] == ["1", "0"]

    def test_sphere_order_zero(self, sphere, sphere_point):
        eta = truncated_lift(sphere.chart(2), sphere_point, 0, 0)
        # q_0 = 1/2, so the field is z d/dx - x d/dz
        assert [str(c) for c in eta.coeffs] == ["z", "0", "-x"]

    def test_sphere_order_two_series(self, sphere, sphere_point):
        chart = sphere.chart(2)
        for order in range(0, 4):
            eta = truncated_lift(chart, sphere_point, 0, order)
            jet = embed_field(eta, chart, sphere_point, order + 3)
            lead = jet.components[0]
            assert lead.coefficient((0, 0)) == 1
            rest = lead - type(lead).constant(1, lead.order, 2)
            val = rest.valuation()
            assert val is None or val > order
            assert jet.components[1].is_zero() or jet.components[1].valuation() > order

    def test_successive_lifts_differ_deep(self, sphere, sphere_point):
        chart = sphere.chart(2)
        for order in range(0, 3):
            a = truncated_lift(chart, sphere_point, 0, order)
            b = truncated_lift(chart, sphere_point, 0, order + 1)
            diff = a - b
            if not diff.is_zero():
                assert filtration_level(diff, sphere_point) >= order


class TestParsePrint:
    def test_round_trip(self, sphere):
        eta = delta_field(sphere, 0, 1) * sphere.element("x + z")
        parsed = parse_vector_field(sphere, str(eta))
        assert parsed == eta

    def test_explicit_string(self, circle):
        eta = parse_vector_field(circle, "(2*y)*d/dx - (2*x)*d/dy")
        assert eta == delta_field(circle, 0, 1)

    def test_zero(self, sphere):
        eta = parse_vector_field(sphere, "0")
        assert eta.is_zero()
