"""Truncated power series at a point: Taylor expansion and embeddings.

Everything here works in the shifted chart parameters centered at a
point (the series variables X_1, ..., X_s stand for t_i - t_i(p)).
Quotient-ring and localized elements expand to truncated series by
solving the defining equations for the non-parameter coordinates with
Newton iteration; the square Jacobian submatrix of the chart minor is
exactly the data making the linearized systems solvable.  Vector fields
embed componentwise, giving the graded picture in which the degree of
(monomial of degree d) * d/dX_i is d - 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from varfields import kernels
from varfields.errors import NotInvertibleError, StructuralError, WorkbenchError
from varfields.groebner import QuotientElement
from varfields.poly import Polynomial
from varfields.variety import Chart, LocalElement, Point


class JetSeries:
    """Dense-by-degree truncated series in s variables.

    ``coeffs`` maps exponent tuples of total degree <= order to nonzero
    rational coefficients; arithmetic never consults degrees beyond the
    truncation order.
    """

    __slots__ = ("coeffs", "order", "nvars")

    def __init__(self, coeffs: dict, order: int, nvars: int):
        self.coeffs = {m: c for m, c in coeffs.items() if c and sum(m) <= order}
        self.order = order
        self.nvars = nvars

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, value, order: int, nvars: int) -> "JetSeries":
        value = Fraction(value)
        return cls({(0,) * nvars: value} if value else {}, order, nvars)

    @classmethod
    def variable(cls, i: int, order: int, nvars: int) -> "JetSeries":
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        if order < 1:
            return cls({}, order, nvars)
        return cls({mono: Fraction(1)}, order, nvars)

    # -- structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.nvars, Fraction(0))

    def valuation(self) -> int | None:
        """Minimal total degree with a nonzero coefficient; None if zero."""
        if not self.coeffs:
            return None
        return min(sum(m) for m in self.coeffs)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(mono), Fraction(0))

    def truncate(self, order: int) -> "JetSeries":
        if order >= self.order:
            return JetSeries(self.coeffs, order if order == self.order else self.order, self.nvars)
        return JetSeries({m: c for m, c in self.coeffs.items() if sum(m) <= order}, order, self.nvars)

    # -- arithmetic ------------------------------------------------------

    def _common_order(self, other: "JetSeries") -> int:
        if self.nvars != other.nvars:
            raise StructuralError("series in different numbers of variables")
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetSeries.constant(other, self.order, self.nvars)
        order = self._common_order(other)
        out = kernels.tmap_add(self.coeffs, other.coeffs)
        return JetSeries(out, order, self.nvars)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetSeries.constant(other, self.order, self.nvars)
        order = self._common_order(other)
        return JetSeries(kernels.tmap_sub(self.coeffs, other.coeffs), order, self.nvars)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return JetSeries(kernels.tmap_neg(self.coeffs), self.order, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return JetSeries(kernels.tmap_scale(self.coeffs, Fraction(other)), self.order, self.nvars)
        order = self._common_order(other)
        return JetSeries(kernels.series_mul(self.coeffs, other.coeffs, order), order, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = JetSeries.constant(1, self.order, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, i: int) -> "JetSeries":
        """Formal partial derivative; the reliable order drops by one."""
        out = {}
        for m, c in self.coeffs.items():
            e = m[i]
            if e:
                dm = m[:i] + (e - 1,) + m[i + 1 :]
                out[dm] = out.get(dm, Fraction(0)) + c * e
        return JetSeries(out, max(self.order - 1, 0), self.nvars)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetSeries.constant(other, self.order, self.nvars)
        if not isinstance(other, JetSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def agrees_to_order(self, other: "JetSeries", order: int) -> bool:
        return self.truncate(order).coeffs == other.truncate(order).coeffs

    def __hash__(self):
        return hash((self.order, self.nvars, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return f"0 + O({self.order + 1})"
        chunks = []
        for m in sorted(self.coeffs, key=lambda m: (sum(m), m)):
            c = self.coeffs[m]
            factors = [
                f"u{i + 1}" if e == 1 else f"u{i + 1}^{e}"
                for i, e in enumerate(m)
                if e
            ]
            mag = abs(c)
            body = "*".join(factors) if factors else str(mag)
            if factors and mag != 1:
                body = f"{mag}*{body}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(("+ " if c > 0 else "- ") + body)
        return " ".join(chunks) + f" + O({self.order + 1})"

    def __repr__(self):
        return f"Jet<{self}>"


def series_invert(a: JetSeries) -> JetSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = a.constant_term()
    if not c0:
        raise NotInvertibleError("series has zero constant term")
    u = JetSeries.constant(1 / c0, a.order, a.nvars)
    one = JetSeries.constant(1, a.order, a.nvars)
    for _ in range(max(1, math.ceil(math.log2(a.order + 1)) + 1)):
        if a * u == one:
            return u
        u = u * (one + one - a * u)
    if a * u != one:
        raise WorkbenchError("series inversion failed to converge")
    return u


def poly_at_series(p: Polynomial, values: Sequence[JetSeries], order: int) -> JetSeries:
    """Evaluate an ambient polynomial at a tuple of series, truncated."""
    if len(values) != p.ring.nvars:
        raise StructuralError("value count does not match the variable count")
    nvars = values[0].nvars if values else 0
    powers: dict[tuple[int, int], JetSeries] = {}

    def power(i: int, e: int) -> JetSeries:
        key = (i, e)
        cached = powers.get(key)
        if cached is None:
            cached = values[i] if e == 1 else power(i, e - 1) * values[i]
            powers[key] = cached
        return cached

    out = JetSeries.constant(0, order, nvars)
    for mono, c in p.terms.items():
        term = JetSeries.constant(c, order, nvars)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def _solve_series_system(mat, rhs, order: int, nvars: int):
    """Solve a square linear system over truncated series by elimination.

    Pivots must have invertible (nonzero constant term) entries, which
    is guaranteed when the constant matrix is invertible.
    """
    n = len(mat)
    work = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if work[r][col].constant_term()), None
        )
        if pivot is None:
            raise WorkbenchError("series system pivot failure; minor not invertible at point")
        work[col], work[pivot] = work[pivot], work[col]
        inv = series_invert(work[col][col])
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [work[i][n] for i in range(n)]


def coordinate_series(chart: Chart, point: Point, order: int) -> list[JetSeries]:
    """Series expansions of all ambient coordinates at the point.

    Parameter coordinates expand to (variable + value); minor-column
    coordinates are solved from the defining equations by Newton
    iteration, doubling the valid order each step.  The result is
    cached on the chart and certified: every generator vanishes on it
    up to the truncation order.
    """
    key = (point.coords, order)
    cached = chart._jets.get(key)
    if cached is not None:
        return cached
    v = chart.variety
    s = chart.s
    amb: list[JetSeries | None] = [None] * v.n
    for i, pj in enumerate(chart.params):
        amb[pj] = JetSeries.variable(i, order, s) + JetSeries.constant(
            point.coords[pj], order, s
        )
    solved = [JetSeries.constant(point.coords[cq], order, s) for cq in chart.cols]
    if chart.cols:
        rows = [v.generators[r] for r in chart.rows]
        jac_reps = [
            [v.jacobian[r][cq].rep for cq in chart.cols] for r in chart.rows
        ]
        max_iter = max(2, math.ceil(math.log2(order + 1)) + 2)
        for _ in range(max_iter):
            for q, cq in enumerate(chart.cols):
                amb[cq] = solved[q]
            residual = [poly_at_series(g, amb, order) for g in rows]
            if all(r.is_zero() for r in residual):
                break
            mat = [[poly_at_series(e, amb, order) for e in row] for row in jac_reps]
            delta = _solve_series_system(mat, residual, order, s)
            solved = [w - d for w, d in zip(solved, delta)]
        else:
            raise WorkbenchError("Newton iteration for coordinate series did not converge")
    for q, cq in enumerate(chart.cols):
        amb[cq] = solved[q]
    # certificate: every generator vanishes on the series to this order
    for g in v.generators:
        if not poly_at_series(g, amb, order).is_zero():
            raise WorkbenchError(
                f"coordinate series do not annihilate generator {g}; "
                "the point may be singular or the ideal not prime"
            )
    result = [series for series in amb if series is not None]
    assert len(result) == v.n
    chart._jets[key] = result
    return result


def taylor_expand(f, chart: Chart, point: Point, order: int) -> JetSeries:
    """Taylor series of a quotient-ring or localized element at the point."""
    if isinstance(f, (QuotientElement, Polynomial, int, Fraction, str)):
        f = chart.local(f)
    if f.chart is not chart:
        raise StructuralError("localized element from a different chart")
    amb = coordinate_series(chart, point, order)
    num = poly_at_series(f.num.rep, amb, order)
    if not f.power:
        return num
    h_series = poly_at_series(chart.h.rep, amb, order)
    return num * series_invert(h_series) ** f.power


class JetField:
    """A derivation of the truncated series ring: one series per d/dX_i."""

    __slots__ = ("components", "order")

    def __init__(self, components: Sequence[JetSeries], order: int | None = None):
        components = tuple(components)
        if order is None:
            order = min(c.order for c in components)
        self.components = tuple(c.truncate(order) for c in components)
        self.order = order

    @property
    def nvars(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def min_degree(self) -> int | None:
        """Minimal graded degree present (degree of X^k d/dX_i is |k| - 1)."""
        vals = [c.valuation() for c in self.components]
        vals = [v for v in vals if v is not None]
        return min(vals) - 1 if vals else None

    def graded_component(self, degree: int) -> dict:
        """Terms of the given degree as {(monomial, direction): coefficient}."""
        out = {}
        for i, comp in enumerate(self.components):
            for m, c in comp.coeffs.items():
                if sum(m) - 1 == degree:
                    out[(m, i)] = c
        return out

    def partial(self, i: int) -> "JetField":
        return JetField([c.partial(i) for c in self.components], max(self.order - 1, 0))

    def apply(self, series: JetSeries) -> JetSeries:
        out = JetSeries.constant(0, max(series.order - 1, 0), series.nvars)
        for i, comp in enumerate(self.components):
            out = out + comp.truncate(out.order) * series.partial(i)
        return out

    def bracket(self, other: "JetField") -> "JetField":
        """Lie bracket; reliable to one order lower than the operands."""
        order = min(self.order, other.order) - 1
        if order < 0:
            order = 0
        comps = []
        for i in range(self.nvars):
            acc = JetSeries.constant(0, order, self.components[0].nvars)
            for j in range(self.nvars):
                acc = acc + self.components[j].truncate(order) * other.components[i].partial(j).truncate(order)
                acc = acc - other.components[j].truncate(order) * self.components[i].partial(j).truncate(order)
            comps.append(acc)
        return JetField(comps, order)

    def __add__(self, other):
        order = min(self.order, other.order)
        return JetField(
            [a.truncate(order) + b.truncate(order) for a, b in zip(self.components, other.components)],
            order,
        )

    def __sub__(self, other):
        order = min(self.order, other.order)
        return JetField(
            [a.truncate(order) - b.truncate(order) for a, b in zip(self.components, other.components)],
            order,
        )

    def __neg__(self):
        return JetField([-c for c in self.components], self.order)

    def truncate(self, order: int) -> "JetField":
        return JetField([c.truncate(order) for c in self.components], min(order, self.order))

    def agrees_to_order(self, other: "JetField", order: int) -> bool:
        return all(
            a.agrees_to_order(b, order)
            for a, b in zip(self.components, other.components)
        )

    def __eq__(self, other):
        if not isinstance(other, JetField):
            return NotImplemented
        return self.order == other.order and self.components == other.components

    def __repr__(self):
        parts = [f"({c})*d/dX{i + 1}" for i, c in enumerate(self.components)]
        return "JetField<" + " + ".join(parts) + ">"


def embed_field(eta, chart: Chart, point: Point, order: int) -> JetField:
    """Embed a vector field into derivations of the truncated series ring."""
    comps = [
        taylor_expand(coeff, chart, point, order)
        for coeff in eta.chart_coefficients(chart)
    ]
    return JetField(comps, order)
