"""Affine varieties, Jacobian charts and localized algebra elements.

A variety is the zero locus of the given ideal generators.  The
Jacobian matrix of the generators is reduced into the quotient ring; its
rank r over the fraction field is certified by exhibiting one nonzero
r x r minor while checking that every (r+1) x (r+1) minor vanishes in
the quotient ring.  Each nonzero r x r minor h yields a chart: on the
locus where h does not vanish, the variables whose columns avoid the
minor serve as chart parameters t_1, ..., t_s, and the remaining
variables are implicit functions of them.  Derivations with respect to
the chart parameters are computed by Cramer's rule, with denominator h,
which is why localized elements f / h^k appear throughout.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from varfields import linalg
from varfields.errors import (
    EmptyVarietyError,
    PointNotOnVarietyError,
    RankCertificationError,
    SingularChartError,
    StructuralError,
)
from varfields.groebner import Ideal, QuotientElement, divmod_multi
from varfields.poly import MonomialOrder, Polynomial, PolyRing


class Variety:
    """An affine variety with certified Jacobian rank and standard atlas."""

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial]):
        self.ring = ring
        self.generators = tuple(g for g in generators if not g.is_zero())
        self.ideal = Ideal(ring, self.generators)
        if not self.ideal.is_proper():
            raise EmptyVarietyError("1 lies in the defining ideal; the variety is empty")
        self.n = ring.nvars
        self.jacobian = [
            [self.ideal.element(g.partial_derivative(j)) for j in range(self.n)]
            for g in self.generators
        ]
        self.rank, self._witness = self._certify_rank()
        self.dim = self.n - self.rank
        self._atlas: list[Chart] | None = None

    def _certify_rank(self):
        m = len(self.generators)
        top = min(m, self.n)
        for k in range(top, 0, -1):
            witness = None
            for rows in combinations(range(m), k):
                for cols in combinations(range(self.n), k):
                    minor = linalg.det([[self.jacobian[i][j] for j in cols] for i in rows])
                    if not minor.is_zero():
                        witness = (rows, cols)
                        break
                if witness:
                    break
            if witness:
                # all (k+1)-minors were checked in earlier iterations
                return k, witness
        if m == 0 or all(e.is_zero() for row in self.jacobian for e in row):
            return 0, ((), ())
        raise RankCertificationError("no nonzero minor found for a nonzero Jacobian")

    def standard_atlas(self) -> list["Chart"]:
        """One chart per nonzero rank-sized minor, in deterministic order."""
        if self._atlas is None:
            charts = []
            r = self.rank
            if r == 0:
                charts.append(Chart(self, (), ()))
            else:
                m = len(self.generators)
                for rows in combinations(range(m), r):
                    for cols in combinations(range(self.n), r):
                        minor = linalg.det(
                            [[self.jacobian[i][j] for j in cols] for i in rows]
                        )
                        if not minor.is_zero():
                            charts.append(Chart(self, rows, cols))
            self._atlas = charts
        return self._atlas

    def chart(self, index: int) -> "Chart":
        return self.standard_atlas()[index]

    def element(self, p) -> QuotientElement:
        return self.ideal.element(p)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"Variety<{gens}; rank {self.rank}, dim {self.dim}>"


def build_variety(
    generators: Sequence[Polynomial | str],
    variables: Sequence[str] | None = None,
    order: MonomialOrder | str = "grevlex",
) -> Variety:
    """Build a variety from polynomials or polynomial strings."""
    polys = [g for g in generators if isinstance(g, Polynomial)]
    if polys:
        ring = polys[0].ring
    elif variables is not None:
        ring = PolyRing(variables, order)
    else:
        raise ValueError("string generators need an explicit variable list")
    return Variety(ring, [g if isinstance(g, Polynomial) else ring.from_string(g) for g in generators])


class Chart:
    """A standard chart: the locus where one rank-sized minor is nonzero.

    ``rows``/``cols`` index the minor inside the Jacobian; ``params``
    are the ambient variable positions serving as chart parameters.
    The chart caches the Cramer data for the implicit derivatives
    d x_m / d t_i, each an element of the localization with a single
    power of h in the denominator.
    """

    def __init__(self, variety: Variety, rows: Sequence[int], cols: Sequence[int]):
        self.variety = variety
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.params = tuple(j for j in range(variety.n) if j not in self.cols)
        if len(self.params) != variety.dim:
            raise StructuralError("chart parameter count does not match the dimension")
        if self.rows:
            self.submatrix = [
                [variety.jacobian[i][j] for j in self.cols] for i in self.rows
            ]
            self.h = linalg.det(self.submatrix)
        else:
            self.submatrix = []
            self.h = variety.ideal.element(1)
        if self.h.is_zero():
            raise StructuralError("chart minor vanishes identically")
        self._dxdt: list[list["LocalElement"]] | None = None
        self._dh: list["LocalElement"] | None = None
        self._jets = {}

    @property
    def s(self) -> int:
        return len(self.params)

    def param_names(self) -> tuple[str, ...]:
        return tuple(self.variety.ring.variables[j] for j in self.params)

    def one(self) -> "LocalElement":
        return LocalElement(self, self.variety.ideal.element(1), 0)

    def zero(self) -> "LocalElement":
        return LocalElement(self, self.variety.ideal.element(0), 0)

    def local(self, value, power: int = 0) -> "LocalElement":
        if isinstance(value, LocalElement):
            if value.chart is not self:
                raise StructuralError("localized element from a different chart")
            return value
        if not isinstance(value, QuotientElement):
            value = self.variety.ideal.element(value)
        return LocalElement(self, value, power)

    def coordinate_derivatives(self) -> list[list["LocalElement"]]:
        """dxdt[i][m] = derivative of ambient variable m along parameter i."""
        if self._dxdt is None:
            v = self.variety
            one = v.ideal.element(1)
            zero = v.ideal.element(0)
            table: list[list[LocalElement]] = []
            for i, pi in enumerate(self.params):
                row: list[LocalElement] = [LocalElement(self, zero, 0)] * v.n
                for j, pj in enumerate(self.params):
                    row[pj] = LocalElement(self, one if pi == pj else zero, 0)
                if self.rows:
                    rhs = [-v.jacobian[r][pi] for r in self.rows]
                    for q, cq in enumerate(self.cols):
                        numerator = linalg.det(linalg.replace_column(self.submatrix, q, rhs))
                        row[cq] = LocalElement(self, numerator, 1)
                table.append(row)
            self._dxdt = table
        return self._dxdt

    def minor_derivatives(self) -> list["LocalElement"]:
        """Derivatives of h itself along each chart parameter."""
        if self._dh is None:
            self._dh = [derive_quotient(self.h, i, self) for i in range(self.s)]
        return self._dh

    def to_json(self) -> dict:
        return {
            "minor": str(self.h),
            "rows": list(self.rows),
            "cols": list(self.cols),
            "parameters": list(self.param_names()),
        }

    def __repr__(self):
        return f"Chart<N({self.h}); parameters {', '.join(self.param_names())}>"


def _try_strip_minor(num: QuotientElement, chart: Chart) -> QuotientElement | None:
    """Heuristic exact division of ``num`` by the chart minor in the quotient ring.

    Divides the representative by [h] + Groebner basis; a zero remainder
    certifies divisibility and returns the quotient's normal form.
    """
    divisors = [chart.h.rep, *chart.variety.ideal.groebner_basis]
    quotients, rem = divmod_multi(num.rep, divisors)
    if rem.is_zero():
        return chart.variety.ideal.element(quotients[0])
    return None


class LocalElement:
    """An element num / h^power of the localization of A by the chart minor.

    Canonicalization strips minor factors from the numerator whenever
    plain division certifies divisibility, and represents zero with
    power zero.  Equality is exact via cross-multiplication, which is
    correct because the coordinate ring of an irreducible variety has
    no zero divisors.
    """

    __slots__ = ("chart", "num", "power")

    def __init__(self, chart: Chart, num: QuotientElement, power: int):
        if power < 0:
            num = num * chart.h ** (-power)
            power = 0
        if num.is_zero():
            power = 0
        else:
            while power > 0:
                stripped = _try_strip_minor(num, chart)
                if stripped is None:
                    break
                num = stripped
                power -= 1
        self.chart = chart
        self.num = num
        self.power = power

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_regular(self) -> bool:
        """True if the canonical form has no minor power in the denominator."""
        return self.power == 0

    def _match(self, other) -> "LocalElement":
        if isinstance(other, LocalElement):
            if other.chart is not self.chart:
                raise StructuralError("localized elements from different charts")
            return other
        if isinstance(other, (int, Fraction, QuotientElement, Polynomial, str)):
            return self.chart.local(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._match(other)
        if other is NotImplemented:
            return NotImplemented
        p = max(self.power, other.power)
        h = self.chart.h
        num = self.num * h ** (p - self.power) + other.num * h ** (p - other.power)
        return LocalElement(self.chart, num, p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._match(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return LocalElement(self.chart, -self.num, self.power)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LocalElement(self.chart, self.num * other, self.power)
        other = self._match(other)
        if other is NotImplemented:
            return NotImplemented
        return LocalElement(self.chart, self.num * other.num, self.power + other.power)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.chart.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._match(other)
        if other is NotImplemented:
            return NotImplemented
        h = self.chart.h
        return self.num * h**other.power == other.num * h**self.power

    def __hash__(self):
        return hash((id(self.chart), self.num, self.power))

    def __bool__(self):
        return not self.num.is_zero()

    def evaluate(self, coords) -> Fraction:
        hval = self.chart.h.evaluate(coords)
        if not hval:
            raise SingularChartError("chart minor vanishes at the evaluation point")
        return self.num.evaluate(coords) / hval**self.power

    def __str__(self):
        if self.power == 0:
            return str(self.num)
        return f"({self.num})/({self.chart.h})^{self.power}"

    def __repr__(self):
        return f"Local<{self}>"


def derive_quotient(f: QuotientElement, i: int, chart: Chart) -> LocalElement:
    """Derivative of a quotient-ring element along chart parameter i."""
    dxdt = chart.coordinate_derivatives()[i]
    out = chart.zero()
    for m in range(chart.variety.n):
        partial = f.rep.partial_derivative(m)
        if partial.is_zero():
            continue
        out = out + dxdt[m] * chart.variety.ideal.element(partial)
    return out


def chart_derivative(f, i: int, chart: Chart) -> LocalElement:
    """Derivative along chart parameter i, extended to localized elements.

    Chart parameters satisfy d t_j / d t_i = delta_ij; implicit
    (minor-column) variables are differentiated via Cramer's rule; the
    minor power in the denominator is handled by the quotient rule.
    """
    if isinstance(f, QuotientElement):
        return derive_quotient(f, i, chart)
    if not isinstance(f, LocalElement):
        f = chart.local(f)
    if f.chart is not chart:
        raise StructuralError("localized element from a different chart")
    du = derive_quotient(f.num, i, chart)
    term = LocalElement(chart, du.num, du.power + f.power)
    if f.power:
        dh = chart.minor_derivatives()[i]
        correction = LocalElement(
            chart, f.num * dh.num * f.power, dh.power + f.power + 1
        )
        term = term - correction
    return term


class Point:
    """A rational point lying on the variety and inside its chart."""

    __slots__ = ("chart", "coords", "h_value")

    def __init__(self, chart: Chart, coords: Sequence):
        v = chart.variety
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != v.n:
            raise StructuralError(f"point has {len(coords)} coordinates, expected {v.n}")
        for g in v.generators:
            val = g.evaluate(coords)
            if val:
                raise PointNotOnVarietyError(
                    f"generator {g} evaluates to {val} at {tuple(map(str, coords))}"
                )
        hval = chart.h.evaluate(coords)
        if not hval:
            raise SingularChartError(
                f"chart minor {chart.h} vanishes at {tuple(map(str, coords))}"
            )
        self.chart = chart
        self.coords = coords
        self.h_value = hval

    def param_values(self) -> tuple[Fraction, ...]:
        return tuple(self.coords[j] for j in self.chart.params)

    def shifted_parameter(self, i: int) -> QuotientElement:
        """The centered parameter t_i - t_i(point) as a quotient element."""
        ring = self.chart.variety.ring
        j = self.chart.params[i]
        return self.chart.variety.ideal.element(ring.gen(j) - ring.const(self.coords[j]))

    def to_json(self) -> dict:
        return {"coords": [str(c) for c in self.coords]}

    def __eq__(self, other):
        return (
            isinstance(other, Point)
            and self.chart is other.chart
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.chart), self.coords))

    def __repr__(self):
        return f"Point{tuple(map(str, self.coords))}"


def local_parameter_check(chart: Chart, point) -> bool:
    """Verify the centered chart parameters are local parameters at the point.

    Checks invertibility of the s x s matrix with entries
    (h * d(t_j - t_j(p)) / d t_i)(p); raises if the point is invalid
    for the chart.
    """
    if not isinstance(point, Point):
        point = Point(chart, point)
    s = chart.s
    mat = []
    for i in range(s):
        row = []
        for j in range(s):
            tbar = point.shifted_parameter(j)
            d = chart_derivative(tbar, i, chart)
            hd = LocalElement(chart, d.num * chart.h, d.power)
            row.append(hd.evaluate(point.coords))
        mat.append(row)
    return linalg.frac_invertible(mat)
