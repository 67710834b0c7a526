"""The Lie algebra of polynomial vector fields on a variety.

A vector field is an n-tuple of quotient-ring coefficients lying in the
kernel of the Jacobian matrix; this membership certificate is checked
at construction.  The full module of fields is never computed as such:
the workbench provides the membership test together with constructor
families (hypersurface rotation fields, minor-scaled chart derivations,
truncated lifts) and closes them under brackets and function multiples,
which covers every computation the theory needs.

In a chart the coefficient of d/dt_i is just the ambient coefficient at
the parameter position, since eta(t_i) = eta(x_{params[i]}).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from varfields.errors import (
    ParseError,
    SingularChartError,
    StructuralError,
    UnsupportedConstructorError,
)
from varfields.groebner import QuotientElement
from varfields.poly import Polynomial
from varfields.variety import Chart, LocalElement, Point, Variety


def is_vector_field(coeffs: Sequence[QuotientElement], variety: Variety) -> bool:
    """True if the coefficient tuple lies in the kernel of the Jacobian."""
    if len(coeffs) != variety.n:
        return False
    for row in variety.jacobian:
        acc = variety.ideal.element(0)
        for e, c in zip(row, coeffs):
            acc = acc + e * c
        if not acc.is_zero():
            return False
    return True


class VectorField:
    """A derivation of the coordinate ring, stored by ambient coefficients."""

    __slots__ = ("variety", "coeffs")

    def __init__(self, variety: Variety, coeffs: Sequence, check: bool = True):
        qcoeffs = tuple(
            c if isinstance(c, QuotientElement) else variety.ideal.element(c)
            for c in coeffs
        )
        if len(qcoeffs) != variety.n:
            raise StructuralError(
                f"vector field needs {variety.n} coefficients, got {len(qcoeffs)}"
            )
        if check and not is_vector_field(qcoeffs, variety):
            raise StructuralError(
                "coefficients do not annihilate the defining ideal (not in Ker J)"
            )
        self.variety = variety
        self.coeffs = qcoeffs

    # -- action on functions ------------------------------------------

    def apply(self, f) -> QuotientElement:
        """eta(f) for f in the coordinate ring."""
        if not isinstance(f, QuotientElement):
            f = self.variety.ideal.element(f)
        out = self.variety.ideal.element(0)
        for m, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            partial = f.rep.partial_derivative(m)
            if not partial.is_zero():
                out = out + c * self.variety.ideal.element(partial)
        return out

    def apply_local(self, f: LocalElement) -> LocalElement:
        """eta(f) for localized f, via the quotient rule."""
        chart = f.chart
        du = chart.local(self.apply(f.num))
        term = LocalElement(chart, du.num, du.power + f.power)
        if f.power:
            dh = self.apply(chart.h)
            correction = LocalElement(chart, f.num * dh * f.power, f.power + 1)
            term = term - correction
        return term

    # -- Lie algebra and module structure ------------------------------

    def bracket(self, other: "VectorField") -> "VectorField":
        self._same_variety(other)
        coeffs = [
            self.apply(bj) - other.apply(aj)
            for aj, bj in zip(self.coeffs, other.coeffs)
        ]
        return VectorField(self.variety, coeffs, check=False)

    def _same_variety(self, other: "VectorField"):
        if self.variety is not other.variety and self.variety.ideal != other.variety.ideal:
            raise StructuralError("vector fields on different varieties")

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        self._same_variety(other)
        return VectorField(
            self.variety,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            check=False,
        )

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        self._same_variety(other)
        return VectorField(
            self.variety,
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
            check=False,
        )

    def __neg__(self):
        return VectorField(self.variety, [-a for a in self.coeffs], check=False)

    def __mul__(self, other):
        """Function multiple f * eta, still a vector field."""
        if isinstance(other, (int, Fraction, QuotientElement, Polynomial, str)):
            if not isinstance(other, QuotientElement):
                other = self.variety.ideal.element(other)
            return VectorField(
                self.variety, [other * a for a in self.coeffs], check=False
            )
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        self._same_variety(other)
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    # -- chart form ----------------------------------------------------

    def chart_coefficients(self, chart: Chart) -> list[LocalElement]:
        """Coefficients of d/dt_i; these are eta(t_i), elements of A."""
        if chart.variety is not self.variety:
            raise StructuralError("chart belongs to a different variety")
        return [chart.local(self.coeffs[j]) for j in chart.params]

    def __str__(self):
        names = self.variety.ring.variables
        chunks = [
            f"({c})*d/d{name}"
            for c, name in zip(self.coeffs, names)
            if not c.is_zero()
        ]
        return " + ".join(chunks) if chunks else "0"

    def __repr__(self):
        return f"Field<{self}>"


def parse_vector_field(variety: Variety, text: str) -> VectorField:
    """Parse ``(f1)*d/dx1 + ... + (fn)*d/dxn`` with polynomial coefficients."""
    names = variety.ring.variables
    coeffs = [variety.ring.zero() for _ in names]
    text = text.strip()
    if text == "0":
        return VectorField(variety, coeffs, check=False)
    # split into signed segments at top parenthesis level
    segments = []
    depth = 0
    current = ""
    sign = 1
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and current.strip().endswith(tuple(names)):
            segments.append((sign, current))
            sign = 1 if ch == "+" else -1
            current = ""
        else:
            current += ch
    if current.strip():
        segments.append((sign, current))
    for seg_sign, seg in segments:
        seg = seg.strip()
        marker = seg.rfind("d/d")
        if marker < 0:
            raise ParseError(f"segment {seg!r} lacks a d/d<var> marker")
        var = seg[marker + 3 :].strip()
        if var not in names:
            raise ParseError(f"unknown direction {var!r}")
        head = seg[:marker].strip()
        if head.endswith("*"):
            head = head[:-1].strip()
        coeff = variety.ring.one() if not head else variety.ring.from_string(head)
        coeffs[names.index(var)] = coeffs[names.index(var)] + coeff * seg_sign
    return VectorField(variety, coeffs)


def delta_field(variety: Variety, i: int, j: int) -> VectorField:
    """Rotation-style field for a hypersurface defined by a single g.

    Coefficient dg/dx_j at position i and -dg/dx_i at position j; it
    annihilates g identically, hence lies in Ker J.
    """
    if len(variety.generators) != 1:
        raise UnsupportedConstructorError(
            "delta fields are only defined for hypersurfaces (single generator)"
        )
    if not (0 <= i < variety.n and 0 <= j < variety.n):
        raise ValueError("direction index out of range")
    g = variety.generators[0]
    coeffs = [variety.ring.zero() for _ in range(variety.n)]
    if i != j:
        coeffs[i] = g.partial_derivative(j)
        coeffs[j] = -g.partial_derivative(i)
    return VectorField(variety, coeffs)


def chart_basic_field(chart: Chart, i: int) -> VectorField:
    """The field h * d/dt_i, with ambient coefficients inside A.

    Parameter positions carry h * delta; minor-column positions carry
    the Cramer determinants themselves (the h in h * d/dt_i cancels the
    Cramer denominator).
    """
    v = chart.variety
    if not 0 <= i < chart.s:
        raise ValueError("chart parameter index out of range")
    coeffs = [v.ideal.element(0)] * v.n
    for j, pj in enumerate(chart.params):
        coeffs[pj] = chart.h if i == j else v.ideal.element(0)
    dxdt = chart.coordinate_derivatives()[i]
    for cq in chart.cols:
        entry = dxdt[cq]
        # entry = num / h: h * entry = num when power is 1, else num * h^(1-power)
        coeffs[cq] = entry.num * chart.h ** (1 - entry.power)
    return VectorField(v, coeffs)


def filtration_level(eta: VectorField, point: Point, cap: int = 16) -> int:
    """Largest l such that eta sends functions into the (l+1)-st power
    of the maximal ideal at the point, computed from the vanishing
    orders of the chart coefficients and capped at ``cap``.
    """
    from varfields.jets import taylor_expand

    chart = point.chart
    best = None
    for coeff in eta.chart_coefficients(chart):
        if coeff.is_zero():
            continue
        series = taylor_expand(coeff, chart, point, cap)
        val = series.valuation()
        if val is not None and (best is None or val < best):
            best = val
    if best is None:
        return cap
    return min(best - 1, cap)


def truncated_lift(chart: Chart, point: Point, i: int, order: int) -> VectorField:
    """A genuine vector field whose chart expansion is d/dt_i plus
    terms of degree greater than ``order`` at the point.

    Built by inverting the Taylor series of the minor h at the point,
    truncating the inverse to a polynomial q, and forming q * (h d/dt_i).
    """
    from varfields.jets import series_invert, taylor_expand

    if point.chart is not chart:
        raise StructuralError("point does not belong to this chart")
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    if not point.h_value:
        raise SingularChartError("minor vanishes at the point")
    h_series = taylor_expand(chart.local(chart.h), chart, point, order)
    q_series = series_invert(h_series)
    ring = chart.variety.ring
    q_poly = ring.zero()
    shifted = [
        ring.gen(pj) - ring.const(point.coords[pj]) for pj in chart.params
    ]
    for mono, c in q_series.coeffs.items():
        term = ring.const(c)
        for var, e in zip(shifted, mono):
            if e:
                term = term * var**e
        q_poly = q_poly + term
    q = chart.variety.ideal.element(q_poly)
    return chart_basic_field(chart, i) * q
