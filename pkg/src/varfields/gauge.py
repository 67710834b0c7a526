"""Gauge fields and the induced module action on localized sections.

A gauge field assigns to each chart direction an A_(h)-linear operator
B_i on A_(h) (x) U, stored as a matrix over localized elements, subject
to two exactly checkable axioms: each B_i commutes with the module
action of the graded generators, and the shifted derivations
d/dt_i + B_i mutually commute (a flat-connection condition).  Given a
gauge field, a vector field written as sum f_i d/dt_i acts on g (x) u
by the derivation rule plus the gauge term plus a finite tail of higher
derivative terms weighted by the module action:

    (f d/dt_i) . (g (x) u) = f dg/dt_i (x) u + g f B_i(1 (x) u)
        + sum_k (1/k!) g d^k f/dt^k (x) rho(X^k d/dX_i) u.

The tail stops at |k| = level(U) because higher-degree generators act
as zero.  Tensor modules are the B = 0 case.  The density machinery at
the bottom of the module turns the simplicity argument into an
executable procedure producing explicit membership certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Sequence

from varfields import linalg
from varfields.errors import AxiomViolationError, StructuralError
from varfields.groebner import QuotientElement
from varfields.jets import taylor_expand
from varfields.repn import FiniteModule, LBasis, basis_below_level, gl_family
from varfields.variety import Chart, LocalElement, Point, Variety, chart_derivative
from varfields.vfields import VectorField, chart_basic_field, delta_field


class GaugeField:
    """Chart-direction matrices B_i over localized elements, validated."""

    def __init__(self, chart: Chart, module: FiniteModule, matrices: Sequence, check: bool = True):
        d = module.dim
        if len(matrices) != chart.s:
            raise StructuralError(f"need {chart.s} direction matrices, got {len(matrices)}")
        self.chart = chart
        self.module = module
        self.matrices = [
            [[chart.local(entry) for entry in row] for row in mat] for mat in matrices
        ]
        for mat in self.matrices:
            if len(mat) != d or any(len(row) != d for row in mat):
                raise StructuralError(f"gauge matrices must be {d} x {d}")
        if check:
            self.validate()

    @classmethod
    def zero(cls, chart: Chart, module: FiniteModule) -> "GaugeField":
        d = module.dim
        z = chart.zero()
        return cls(chart, module, [[[z] * d for _ in range(d)] for _ in range(chart.s)], check=False)

    def is_zero(self) -> bool:
        return all(e.is_zero() for mat in self.matrices for row in mat for e in row)

    def max_power(self) -> int:
        powers = [e.power for mat in self.matrices for row in mat for e in row]
        return max(powers, default=0)

    def validate(self) -> None:
        """Check the commutation and flatness axioms exactly; raise with a witness."""
        chart = self.chart
        d = self.module.dim
        zero = chart.zero()
        # axiom: [B_i, rho(a)] = 0 for every housed generator a
        for a in basis_below_level(self.module.s, self.module.level):
            rho = self.module.matrix(a)
            if linalg.mat_is_zero(rho):
                continue
            for i, b in enumerate(self.matrices):
                for m in range(d):
                    for q in range(d):
                        acc = zero
                        for k in range(d):
                            acc = acc + b[m][k] * rho[k][q] - rho[m][k] * b[k][q]
                        if not acc.is_zero():
                            raise AxiomViolationError(
                                "gauge field does not commute with the module action",
                                witness={
                                    "axiom": "commutant",
                                    "generator": repr(a),
                                    "direction": i,
                                    "entry": [m, q],
                                    "value": str(acc),
                                },
                            )
        # axiom: dB_j/dt_i - dB_i/dt_j + [B_i, B_j] = 0
        for i in range(chart.s):
            for j in range(i + 1, chart.s):
                bi, bj = self.matrices[i], self.matrices[j]
                for m in range(d):
                    for q in range(d):
                        acc = chart_derivative(bj[m][q], i, chart) - chart_derivative(
                            bi[m][q], j, chart
                        )
                        for k in range(d):
                            acc = acc + bi[m][k] * bj[k][q] - bj[m][k] * bi[k][q]
                        if not acc.is_zero():
                            raise AxiomViolationError(
                                "shifted derivations do not commute (flatness fails)",
                                witness={
                                    "axiom": "flatness",
                                    "directions": [i, j],
                                    "entry": [m, q],
                                    "value": str(acc),
                                },
                            )

    def to_json(self) -> dict:
        return {
            "matrices": [
                [[str(e) for e in row] for row in mat] for mat in self.matrices
            ]
        }


class GaugeModule:
    """The space A_(h) (x) U with a validated gauge action.

    ``generators`` optionally names a free A-basis (as elements) for
    finitely generated submodules; None means the full localized space
    with its canonical free basis 1 (x) u_q.
    """

    def __init__(
        self,
        chart: Chart,
        module: FiniteModule,
        gauge_field: GaugeField | None = None,
        generators=None,
        name: str = "",
    ):
        if module.s != chart.s:
            raise StructuralError(
                f"module is over s = {module.s} but the chart has {chart.s} parameters"
            )
        self.variety = chart.variety
        self.chart = chart
        self.U = module
        self.field = gauge_field if gauge_field is not None else GaugeField.zero(chart, module)
        if self.field.chart is not chart or self.field.module is not module:
            raise StructuralError("gauge field belongs to different chart or module data")
        self.generators = generators
        self.name = name
        self._tail_cache: list[list[tuple[tuple[int, ...], list[list[Fraction]]]]] | None = None

    @property
    def dim(self) -> int:
        return self.U.dim

    def zero(self) -> "GaugeElement":
        z = self.chart.zero()
        return GaugeElement(self, (z,) * self.dim)

    def element(self, coeffs: Sequence) -> "GaugeElement":
        return GaugeElement(self, [self.chart.local(c) for c in coeffs])

    def basis_element(self, q: int, coeff=1) -> "GaugeElement":
        coeffs = [self.chart.zero()] * self.dim
        coeffs[q] = self.chart.local(coeff)
        return GaugeElement(self, coeffs)

    def _tail_generators(self, i: int):
        """Nonzero rho(X^k d/dX_i) with |k| >= 1, paired with 1/k! weights."""
        if self._tail_cache is None:
            self._tail_cache = [[] for _ in range(self.chart.s)]
            for a in basis_below_level(self.U.s, self.U.level):
                mat = self.U.action.get(a)
                if mat is None:
                    continue
                weight = Fraction(1, math.prod(math.factorial(e) for e in a.exps))
                scaled = linalg.mat_scale(mat, weight)
                self._tail_cache[a.direction].append((a.exps, scaled))
        return self._tail_cache[i]

    def __repr__(self):
        label = self.name or f"A_({self.chart.h})xU"
        return f"GaugeModule<{label}, dim {self.dim}>"


class GaugeElement:
    """A finite sum of localized coefficients against the module basis."""

    __slots__ = ("module", "coeffs")

    def __init__(self, module: GaugeModule, coeffs: Sequence[LocalElement]):
        coeffs = tuple(coeffs)
        if len(coeffs) != module.dim:
            raise StructuralError(f"need {module.dim} coefficients, got {len(coeffs)}")
        self.module = module
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def _match(self, other: "GaugeElement"):
        if self.module is not other.module:
            raise StructuralError("elements of different gauge modules")

    def __add__(self, other):
        self._match(other)
        return GaugeElement(self.module, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._match(other)
        return GaugeElement(self.module, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return GaugeElement(self.module, [-a for a in self.coeffs])

    def __mul__(self, other):
        """Scaling by a function (localized element) or a rational."""
        if isinstance(other, (int, Fraction)):
            return GaugeElement(self.module, [c * other for c in self.coeffs])
        other = self.module.chart.local(other)
        return GaugeElement(self.module, [c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GaugeElement):
            return NotImplemented
        self._match(other)
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((id(self.module), self.coeffs))

    def max_power(self) -> int:
        return max((c.power for c in self.coeffs), default=0)

    def __str__(self):
        chunks = [
            f"({c}) (x) {self.module.U.labels[q]}"
            for q, c in enumerate(self.coeffs)
            if not c.is_zero()
        ]
        return " + ".join(chunks) if chunks else "0"

    def __repr__(self):
        return f"GaugeElt<{self}>"

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}


def function_act(f, v: GaugeElement) -> GaugeElement:
    """The left action of a function: componentwise multiplication."""
    return v * f


def act_chart_term(f: LocalElement, i: int, v: GaugeElement, M: GaugeModule) -> GaugeElement:
    """Action of f d/dt_i on v, by the gauge action formula."""
    chart = M.chart
    if f.chart is not chart:
        raise StructuralError("coefficient from a different chart")
    d = M.dim
    out = [chart.zero() for _ in range(d)]
    if f.is_zero() or v.is_zero():
        return GaugeElement(M, out)
    tail = M._tail_generators(i)
    # iterated derivatives of f, shared across basis components
    derivs: dict[tuple[int, ...], LocalElement] = {}

    def deriv(exps: tuple[int, ...]) -> LocalElement:
        got = derivs.get(exps)
        if got is None:
            j = next(idx for idx, e in enumerate(exps) if e)
            lower = exps[:j] + (exps[j] - 1,) + exps[j + 1 :]
            base = f if not any(lower) else deriv(lower)
            got = chart_derivative(base, j, chart)
            derivs[exps] = got
        return got

    bmat = M.field.matrices[i]
    for q, g in enumerate(v.coeffs):
        if g.is_zero():
            continue
        out[q] = out[q] + f * chart_derivative(g, i, chart)
        gf = g * f
        if not M.field.is_zero():
            for m in range(d):
                if not bmat[m][q].is_zero():
                    out[m] = out[m] + gf * bmat[m][q]
        for exps, mat in tail:
            col = [mat[m][q] for m in range(d)]
            if not any(col):
                continue
            dfk = deriv(exps)
            if dfk.is_zero():
                continue
            gdf = g * dfk
            for m in range(d):
                if col[m]:
                    out[m] = out[m] + gdf * col[m]
    return GaugeElement(M, out)


def gauge_act(eta: VectorField, v: GaugeElement, M: GaugeModule) -> GaugeElement:
    """Action of a vector field, decomposed over the chart directions."""
    out = M.zero()
    for i, f in enumerate(eta.chart_coefficients(M.chart)):
        if not f.is_zero():
            out = out + act_chart_term(f, i, v, M)
    return out


def tensor_module(chart: Chart, module: FiniteModule, name: str = "") -> GaugeModule:
    """The zero-gauge-field module on A_(h) (x) U."""
    return GaugeModule(chart, module, GaugeField.zero(chart, module), name=name)


# -- the rank-one family on the sphere --------------------------------


def sphere_variety() -> Variety:
    from varfields.catalog import named_variety

    return named_variety("sphere")


def sphere_family(alpha, variety: Variety | None = None) -> GaugeModule:
    """The weight-alpha rank-one family on the sphere, in the chart
    whose minor column is z.

    The chart-independent action is
    (f D_ij) . (g (x) u) = f D_ij(g) (x) u + alpha g D_ij(f) (x) u
    for the rotation fields D_ij; it is realized as a gauge module with
    diagonal generator action alpha and gauge field
    B_i = -alpha * (dz/dt_i) / z = +alpha * t_i / z^2.
    """
    alpha = Fraction(alpha)
    v = variety if variety is not None else sphere_variety()
    chart = v.chart(2)  # minor 2z; parameters x, y
    # rank-one module where each diagonal generator acts by alpha
    U = gl_family("one_dim", 2, alpha=2 * alpha)
    U.labels = (f"u_alpha",)
    ring = v.ring
    # alpha * x / z^2 = 4*alpha*x / (2z)^2, and likewise for y
    bx = LocalElement(chart, v.element(ring.from_string("x") * (4 * alpha)), 2)
    by = LocalElement(chart, v.element(ring.from_string("y") * (4 * alpha)), 2)
    field = GaugeField(chart, U, [[[bx]], [[by]]])
    return GaugeModule(chart, U, field, name=f"F_{alpha}")


def sphere_chartfree_act(
    f: QuotientElement, i: int, j: int, v: GaugeElement, alpha
) -> GaugeElement:
    """(f D_ij) . v by the chart-independent formula, for cross-checks."""
    M = v.module
    variety = M.variety
    alpha = Fraction(alpha)
    dij = delta_field(variety, i, j) * Fraction(1, 2)  # normalize the factor 2 from dg
    out = []
    for g in v.coeffs:
        if g.power:
            raise StructuralError("chart-free formula applies to regular coefficients")
        term = f * dij.apply(g.num) + (g.num * dij.apply(f)) * alpha
        out.append(M.chart.local(term))
    return GaugeElement(M, out)


# -- density machinery --------------------------------------------------


def density_operator(M: GaugeModule, i: int, j: int, v: GaugeElement) -> GaugeElement:
    """The operator h (x) E_ij on the module, computed two ways.

    The commutator of (t_i h d/dt_j) with multiplication by t_i equals
    the closed form sum_q h g_q (x) E_ij u_q; both are computed exactly
    and compared before returning the closed form.
    """
    if M.U.level != 1:
        raise StructuralError("density operators need a level-one module")
    chart = M.chart
    variety = M.variety
    ti = variety.ideal.element(variety.ring.gen(chart.params[i]))
    mu = chart_basic_field(chart, j)
    commutator = gauge_act(mu * ti, v, M) - function_act(ti, gauge_act(mu, v, M))
    eij = M.U.gl_matrix(i, j)
    h = chart.local(chart.h)
    closed = [chart.zero() for _ in range(M.dim)]
    for q, g in enumerate(v.coeffs):
        if g.is_zero():
            continue
        hg = g * h
        for m in range(M.dim):
            if eij[m][q]:
                closed[m] = closed[m] + hg * eij[m][q]
    closed_elt = GaugeElement(M, closed)
    if commutator != closed_elt:
        raise AxiomViolationError(
            "density operator mismatch between commutator and closed form",
            witness={"i": i, "j": j, "input": str(v)},
        )
    return closed_elt


def _span_words(U: FiniteModule, max_len: int):
    """Products of degree-zero generators spanning a subalgebra of End(U).

    Returns (words, mats): parallel lists where each word is a tuple of
    (k, i) letters standing for E_ki, applied left to right as matrix
    product.  Search stops when the span has full dimension d^2 or
    stops growing.
    """
    d = U.dim
    gens = [((k, i), U.gl_matrix(k, i)) for k in range(U.s) for i in range(U.s)]
    gens = [(letter, mat) for letter, mat in gens if not linalg.mat_is_zero(mat)]
    words = [()]
    mats = [linalg.frac_identity(d)]

    def vectorize(mat):
        return [x for row in mat for x in row]

    span_rows = [vectorize(mats[0])]
    frontier = [((), mats[0])]
    for _ in range(max_len):
        new_frontier = []
        for word, mat in frontier:
            for letter, gen in gens:
                cand_word = word + (letter,)
                cand = linalg.mat_mul(mat, gen)
                rank_before = linalg.frac_rank(span_rows)
                trial = span_rows + [vectorize(cand)]
                if linalg.frac_rank(trial) > rank_before:
                    span_rows = trial
                    words.append(cand_word)
                    mats.append(cand)
                    new_frontier.append((cand_word, cand))
        if not new_frontier or len(words) == d * d:
            break
        frontier = new_frontier
    return words, mats


def _express_matrix_unit(U: FiniteModule, target_row: int, target_col: int, words, mats):
    """Coefficients expressing the matrix unit in the word span, or None."""
    d = U.dim
    cols = len(words)
    rows = []
    for a in range(d):
        for b in range(d):
            rows.append([mats[w][a][b] for w in range(cols)])
    rhs = [
        Fraction(1) if (a == target_row and b == target_col) else Fraction(0)
        for a in range(d)
        for b in range(d)
    ]
    return linalg.frac_solve_general(rows, rhs)


@dataclass
class SweepResult:
    status: str  # "reached" or "budget_exhausted"
    power: int | None = None
    function: QuotientElement | None = None
    point: Point | None = None
    applications: int = 0
    trace: list = dataclass_field(default_factory=list)

    @property
    def reached(self) -> bool:
        return self.status == "reached"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "power": self.power,
            "function": str(self.function) if self.function is not None else None,
            "applications": self.applications,
            "trace": list(self.trace),
        }


def density_sweep(
    M: GaugeModule, v: GaugeElement, point: Point, budget: int = 10000
) -> SweepResult:
    """Drive a nonzero element onto h^N f (A (x) U) with f(point) != 0.

    Executes the constructive density procedure: clear denominators,
    realize the projections onto each basis line through words in the
    operators h (x) E_ij, then improve the function by derivative steps
    with the fields h d/dt_i until it is nonzero at the point.  Every
    step is verified exactly; the budget caps operator applications and
    exhaustion is inconclusive rather than a refutation.
    """
    if v.is_zero():
        raise ValueError("density sweep needs a nonzero element")
    if M.U.level != 1:
        raise StructuralError("density sweep needs a level-one module")
    chart = M.chart
    if point.chart is not chart:
        raise StructuralError("point does not belong to the module's chart")
    trace: list = []
    apps = 0
    d = M.dim

    # phase 0: clear denominators
    mpow = v.max_power()
    if mpow:
        v = v * chart.local(chart.h**mpow)
        trace.append(f"cleared denominators with h^{mpow}")
    k0 = next(q for q in range(d) if not v.coeffs[q].is_zero())
    f0 = v.coeffs[k0].num
    trace.append(f"pivot component {k0}, function {f0}")

    # phase 1: words mapping u_{k0} to each u_k and killing the rest
    words, mats = _span_words(M.U, max_len=max(2 * d * d, 4))
    solutions = []
    for k in range(d):
        coeffs = _express_matrix_unit(M.U, k, k0, words, mats)
        if coeffs is None:
            return SweepResult(
                status="budget_exhausted",
                applications=apps,
                trace=trace + [f"matrix unit ({k},{k0}) not in word span; module not simple?"],
            )
        support = [(c, words[w]) for w, c in enumerate(coeffs) if c]
        solutions.append(support)
    rmax = max((len(word) for support in solutions for _, word in support), default=0)

    h_local = chart.local(chart.h)
    held: list[GaugeElement] = []
    for k, support in enumerate(solutions):
        acc = M.zero()
        for coeff, word in support:
            cur = v
            # letters apply left to right as operators composed rightmost-first
            for letter in reversed(word):
                ki, ii = letter
                cur = density_operator(M, ki, ii, cur)
                apps += 1
                if apps > budget:
                    return SweepResult(status="budget_exhausted", applications=apps, trace=trace)
            pad = rmax - len(word)
            if pad:
                cur = cur * chart.local(chart.h**pad)
            acc = acc + cur * coeff
        expected = M.basis_element(k, chart.local(f0 * chart.h**rmax))
        if acc != expected:
            raise AxiomViolationError(
                "density word application did not produce the projected element",
                witness={"component": k, "got": str(acc)},
            )
        held.append(acc)
    power = rmax
    trace.append(f"reached h^{power} f (x) u_k for all k via {len(words)} span words")

    # phase 2: derivative steps until the function is nonzero at the point
    kpow = max(M.field.max_power(), 1)
    f = f0
    guard = 0
    while not f.evaluate(point.coords):
        guard += 1
        if guard > 64:
            return SweepResult(status="budget_exhausted", applications=apps, trace=trace)
        # find a direction along which the vanishing order drops
        direction = None
        for order in range(1, 9):
            series = taylor_expand(chart.local(f), chart, point, order)
            if series.is_zero():
                continue
            mono = min(series.coeffs, key=lambda m: (sum(m), m))
            direction = next(idx for idx, e in enumerate(mono) if e)
            break
        if direction is None:
            return SweepResult(
                status="budget_exhausted",
                applications=apps,
                trace=trace + ["function vanishes to high order at the point"],
            )
        mu = chart_basic_field(chart, direction)
        df = chart_derivative(chart.local(f), direction, chart)
        dh = chart.minor_derivatives()
        npk = power + kpow
        base = chart.local(f * chart.h**npk)
        new_held = []
        for k in range(d):
            lhs = gauge_act(mu, M.basis_element(k, base), M)
            apps += 1
            if apps > budget:
                return SweepResult(status="budget_exhausted", applications=apps, trace=trace)
            # subtract the three terms known to lie in h^power f (A (x) U)
            rest = M.basis_element(k, base * dh[direction] * npk)
            bcol = M.field.matrices[direction]
            for m in range(d):
                if not bcol[m][k].is_zero():
                    rest = rest + M.basis_element(m, base * h_local * bcol[m][k])
            for q in range(M.U.s):
                eqd = M.U.gl_matrix(q, direction)
                for m in range(d):
                    if eqd[m][k]:
                        rest = rest + M.basis_element(m, base * dh[q] * eqd[m][k])
            extracted = lhs - rest
            target_coeff = LocalElement(chart, df.num * chart.h ** (npk + 1), df.power)
            if extracted != M.basis_element(k, target_coeff):
                raise AxiomViolationError(
                    "derivative step expansion mismatch",
                    witness={"component": k, "direction": direction},
                )
            new_held.append(extracted)
        held = new_held
        power = npk + 1 - df.power
        f = df.num
        trace.append(
            f"derivative step along t_{direction + 1}: now h^{power} {f} (x) u_k"
        )
    trace.append(f"function value at point: {f.evaluate(point.coords)}")
    return SweepResult(
        status="reached",
        power=power,
        function=f,
        point=point,
        applications=apps,
        trace=trace,
    )
