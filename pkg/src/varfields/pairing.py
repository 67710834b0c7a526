"""The adjoint pairing between a finitely generated module and the
induced module on the dual of its fiber at a point.

The fiber is the quotient of the module by the maximal-ideal multiples
at a nonsingular point; for a free module it is computed by evaluating
the coefficients.  Its non-negative-degree action is extracted by
acting with jet-graded representative fields and evaluating at the
point.  Words in functions and fields pair a module element against a
functional through the anti-involution that fixes functions and
negates fields:

    <m, w . (1 (x) phi)>  =  phi( fiber-projection of tau(w) . m ).

Well-definedness (the pairing depends only on the induced-module
element w . (1 (x) phi), not on the word w) is the substantive law and
is checked exactly, including against a canonical evaluation through
lift words.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from varfields.errors import StructuralError, UnsupportedPresentationError, WorkbenchError
from varfields.gauge import GaugeElement, GaugeModule, function_act, gauge_act
from varfields.groebner import QuotientElement
from varfields.repn import DualModule, FiniteModule, LBasis, basis_below_level, check_homomorphism, dualize
from varfields.rudakov import RudContext, RudElement, apply_word as rud_apply_word
from varfields.variety import LocalElement, Point
from varfields.vfields import VectorField, truncated_lift


class OperatorWord:
    """A finite product of function letters and field letters.

    Letters are plain objects (vector fields act, everything else is a
    function); they compose right to left, so the last letter acts
    first.  The anti-involution reverses the word, fixes function
    letters and negates field letters.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence = ()):
        self.letters = tuple(letters)

    def tau(self) -> "OperatorWord":
        out = []
        for letter in reversed(self.letters):
            out.append(-letter if isinstance(letter, VectorField) else letter)
        return OperatorWord(out)

    def prepend(self, letter) -> "OperatorWord":
        return OperatorWord((letter,) + self.letters)

    def __len__(self):
        return len(self.letters)

    def apply_gauge(self, m: GaugeElement, M: GaugeModule) -> GaugeElement:
        for letter in reversed(self.letters):
            if isinstance(letter, VectorField):
                m = gauge_act(letter, m, M)
            else:
                m = function_act(M.chart.local(letter), m)
        return m

    def apply_rud(self, v: RudElement) -> RudElement:
        return rud_apply_word(self.letters, v)

    def __repr__(self):
        return f"Word<{len(self.letters)} letters>"


def tau(word: OperatorWord) -> OperatorWord:
    return word.tau()


class QuotientFiber:
    """The fiber of a free module at a point, with its induced action.

    ``scales`` are the diagonal coefficients of the free basis (all
    ones for the canonical basis of the full localized module).
    """

    def __init__(self, M: GaugeModule, point: Point, fm: FiniteModule, scales):
        self.module = M
        self.point = point
        self.fm = fm
        self.scales = scales

    @property
    def dim(self) -> int:
        return self.fm.dim

    def project(self, elem: GaugeElement) -> list[Fraction]:
        coords = self.point.coords
        return [
            c.evaluate(coords) / scale
            for c, scale in zip(elem.coeffs, self.scales)
        ]

    def dual(self) -> DualModule:
        return dualize(self.fm, self.point)

    def to_json(self) -> dict:
        return {"dimension": self.dim, "module": self.fm.to_json()}


def _diagonal_basis(M: GaugeModule, point: Point):
    """The declared free basis as one localized coefficient per line.

    Returns (coefficients, evaluated scales).  None generators mean the
    canonical basis 1 (x) u_q.
    """
    if M.generators is None:
        ones = [M.chart.local(1)] * M.dim
        return ones, [Fraction(1)] * M.dim
    gens = list(M.generators)
    if len(gens) != M.dim:
        raise UnsupportedPresentationError(
            "free presentation must have exactly one generator per basis line"
        )
    coeffs: list = [None] * M.dim
    for g in gens:
        support = [q for q, c in enumerate(g.coeffs) if not c.is_zero()]
        if len(support) != 1:
            raise UnsupportedPresentationError(
                "only diagonal free presentations are supported"
            )
        q = support[0]
        if coeffs[q] is not None:
            raise UnsupportedPresentationError("two generators on one basis line")
        coeffs[q] = g.coeffs[q]
    scales = []
    for q, c in enumerate(coeffs):
        if c is None:
            raise UnsupportedPresentationError(f"basis line {q} has no generator")
        val = c.evaluate(point.coords)
        if not val:
            raise UnsupportedPresentationError(
                "generator coefficient vanishes at the point"
            )
        scales.append(val)
    return coeffs, scales


def fiber(M: GaugeModule, point: Point, level: int | None = None) -> QuotientFiber:
    """Quotient of the module by maximal-ideal multiples at the point.

    The induced action of the graded generator X^k d/dX_i is computed
    by acting with t-bar^k times a truncated lift and evaluating modulo
    the maximal ideal; the result is validated as a Lie homomorphism.
    """
    if point.chart is not M.chart:
        raise StructuralError("point does not belong to the module's chart")
    level = level if level is not None else M.U.level
    basis_coeffs, scales = _diagonal_basis(M, point)
    chart = M.chart
    d = M.dim
    lift_order = level + 1
    lifts = [truncated_lift(chart, point, i, lift_order) for i in range(chart.s)]
    action = {}
    for a in basis_below_level(M.U.s, level):
        rep = lifts[a.direction]
        scale_poly = M.variety.ideal.element(1)
        for k, e in enumerate(a.exps):
            tbar = point.shifted_parameter(k)
            for _ in range(e):
                scale_poly = scale_poly * tbar
        eta = rep * scale_poly
        mat = [[Fraction(0)] * d for _ in range(d)]
        for q in range(d):
            gen = M.basis_element(q, basis_coeffs[q])
            image = gauge_act(eta, gen, M)
            for m in range(d):
                mat[m][q] = image.coeffs[m].evaluate(point.coords) / scales[m]
        action[a] = mat
    fm = FiniteModule(M.U.s, d, level, action, labels=M.U.labels)
    ok, witness = check_homomorphism(fm, witness=True)
    if not ok:
        raise WorkbenchError(f"fiber action is not a Lie homomorphism at {witness}")
    return QuotientFiber(M, point, fm, scales)


class PairingContext:
    """Everything needed to pair one module against one induced module."""

    def __init__(self, M: GaugeModule, point: Point, level: int | None = None):
        self.module = M
        self.point = point
        self.fiber = fiber(M, point, level)
        self.dual = self.fiber.dual()
        self.rud = RudContext(M.chart, point, self.dual)
        self._lift_order_cache: dict[int, list[VectorField]] = {}

    def functional(self, phi: Sequence) -> list[Fraction]:
        phi = [Fraction(x) for x in phi]
        if len(phi) != self.fiber.dim:
            raise StructuralError("functional has the wrong length")
        return phi

    def vacuum_functional(self, phi: Sequence) -> RudElement:
        phi = self.functional(phi)
        out = self.rud.zero()
        for q, c in enumerate(phi):
            if c:
                out = out + self.rud.vacuum(q, c)
        return out

    def lifts(self, order: int) -> list[VectorField]:
        got = self._lift_order_cache.get(order)
        if got is None:
            got = [
                truncated_lift(self.module.chart, self.point, i, order)
                for i in range(self.module.chart.s)
            ]
            self._lift_order_cache[order] = got
        return got


def pair(m: GaugeElement, word: OperatorWord, phi: Sequence, ctx: PairingContext) -> Fraction:
    """<m, word . (1 (x) phi)> via the anti-involution and the fiber."""
    phi = ctx.functional(phi)
    moved = word.tau().apply_gauge(m, ctx.module)
    vec = ctx.fiber.project(moved)
    return sum((p * x for p, x in zip(phi, vec)), Fraction(0))


def pair_rud(m: GaugeElement, r: RudElement, ctx: PairingContext) -> Fraction:
    """Canonical evaluation of <m, r> for an explicit induced element.

    Each basis element y^mono (x) phi_q is realized by a word of
    truncated lifts; the engine verifies the realization reproduces the
    basis element exactly before pairing.
    """
    if r.ctx is not ctx.rud:
        raise StructuralError("induced element from a different context")
    total = Fraction(0)
    for (mono, q), c in r.terms.items():
        order = sum(mono) + ctx.dual.level + 1
        lifts = ctx.lifts(order)
        letters = []
        for k, e in enumerate(mono):
            letters.extend([lifts[k]] * e)
        word = OperatorWord(letters)
        check = word.apply_rud(ctx.rud.vacuum(q))
        if check != ctx.rud.element({(mono, q): 1}):
            raise WorkbenchError(
                "lift word does not realize the induced basis element exactly"
            )
        phi = [Fraction(1) if t == q else Fraction(0) for t in range(ctx.fiber.dim)]
        total += c * pair(m, word, phi, ctx)
    return total


def well_definedness_check(
    m: GaugeElement,
    w1: OperatorWord,
    w2: OperatorWord,
    phi: Sequence,
    ctx: PairingContext,
) -> bool:
    """Equal induced-module reductions must give equal pairings.

    Raises if the two words do not reduce to the same induced element
    (the precondition); otherwise returns whether the pairings agree.
    """
    base = ctx.vacuum_functional(phi)
    r1 = w1.apply_rud(base)
    r2 = w2.apply_rud(base)
    if r1 != r2:
        raise ValueError("words have different induced reductions; check misused")
    return pair(m, w1, phi, ctx) == pair(m, w2, phi, ctx)
