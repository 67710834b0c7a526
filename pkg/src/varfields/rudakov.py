"""Induced modules at a nonsingular point, realized on k[y_1..y_s] (x) U.

The module is spanned by y-monomials against a basis of the finite
module U; the variable y_i is the class of a lift of d/dX_i.  A vector
field acts through its jet at the point: embed it as a derivation of
truncated series, then recurse

    mu . (y_i w) = y_i (mu . w) + [mu, d/dX_i] . w,
    [mu, d/dX_i] = -d(mu)/dX_i,

down to the base case on 1 (x) u, where the constant (degree -1)
coefficients create y's and the non-negative part acts through the
finite module.  Functions act by Taylor expansion: the constant term
scales and each centered parameter acts as -d/dy_k, so high powers of
the maximal ideal annihilate everything of bounded y-degree.

Truncation orders are always made explicit and every field action is
recomputed at one order higher; disagreement is an engine failure, not
a tolerance.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from varfields.errors import StructuralError, WorkbenchError
from varfields.groebner import QuotientElement
from varfields.jets import JetField, embed_field, taylor_expand
from varfields.repn import FiniteModule, LBasis
from varfields.variety import Chart, LocalElement, Point
from varfields.vfields import VectorField, truncated_lift


class RudContext:
    """Chart, base point and finite module for one induced module."""

    def __init__(self, chart: Chart, point: Point, U: FiniteModule):
        if point.chart is not chart:
            raise StructuralError("point does not belong to the chart")
        if U.s != chart.s:
            raise StructuralError(
                f"module is over s = {U.s} but the chart has {chart.s} parameters"
            )
        self.chart = chart
        self.point = point
        self.U = U

    @property
    def s(self) -> int:
        return self.chart.s

    def zero(self) -> "RudElement":
        return RudElement(self, {})

    def element(self, terms: dict) -> "RudElement":
        return RudElement(self, terms)

    def vacuum(self, q: int, coeff=1) -> "RudElement":
        """The element 1 (x) u_q."""
        return RudElement(self, {((0,) * self.s, q): Fraction(coeff)})

    def shifted_parameter(self, k: int) -> QuotientElement:
        return self.point.shifted_parameter(k)

    def __repr__(self):
        return f"RudContext<{self.chart!r}, dim U = {self.U.dim}>"


class RudElement:
    """Finite sum of c * y^m (x) u_q terms."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RudContext, terms: dict):
        self.ctx = ctx
        clean = {}
        for (mono, q), c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            mono = tuple(int(e) for e in mono)
            if len(mono) != ctx.s or any(e < 0 for e in mono):
                raise StructuralError(f"bad y-monomial {mono!r}")
            if not 0 <= q < ctx.U.dim:
                raise StructuralError(f"basis index {q} out of range")
            clean[(mono, q)] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def y_degree(self) -> int:
        """Maximal total y-degree; this is the filtration level marker."""
        if not self.terms:
            return 0
        return max(sum(m) for m, _ in self.terms)

    level = y_degree

    def in_vacuum(self) -> bool:
        """True when the element lies in 1 (x) U."""
        return all(not any(m) for m, _ in self.terms)

    def vacuum_vector(self) -> list[Fraction]:
        if not self.in_vacuum():
            raise StructuralError("element does not lie in 1 (x) U")
        vec = [Fraction(0)] * self.ctx.U.dim
        for (_, q), c in self.terms.items():
            vec[q] = c
        return vec

    def _match(self, other: "RudElement"):
        if self.ctx is not other.ctx:
            raise StructuralError("elements of different induced modules")

    def __add__(self, other):
        self._match(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key, Fraction(0)) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return RudElement(self.ctx, out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return RudElement(self.ctx, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def shift_y(self, j: int) -> "RudElement":
        """Multiplication by y_j."""
        out = {}
        for (mono, q), c in self.terms.items():
            lifted = mono[:j] + (mono[j] + 1,) + mono[j + 1 :]
            out[(lifted, q)] = c
        return RudElement(self.ctx, out)

    def dy(self, j: int) -> "RudElement":
        """Formal partial d/dy_j."""
        out = {}
        for (mono, q), c in self.terms.items():
            e = mono[j]
            if e:
                lowered = mono[:j] + (e - 1,) + mono[j + 1 :]
                key = (lowered, q)
                out[key] = out.get(key, Fraction(0)) + c * e
        return RudElement(self.ctx, out)

    def __eq__(self, other):
        if not isinstance(other, RudElement):
            return NotImplemented
        self._match(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for (mono, q) in sorted(self.terms, key=lambda k: (sum(k[0]), k[0], k[1])):
            c = self.terms[(mono, q)]
            ys = "*".join(
                f"y{i + 1}" if e == 1 else f"y{i + 1}^{e}"
                for i, e in enumerate(mono)
                if e
            )
            label = self.ctx.U.labels[q]
            body = f"{ys} (x) {label}" if ys else f"1 (x) {label}"
            if c == 1:
                chunks.append(body)
            elif c == -1:
                chunks.append(f"-{body}")
            else:
                chunks.append(f"{c}*{body}")
        return " + ".join(chunks).replace("+ -", "- ")

    def __repr__(self):
        return f"Rud<{self}>"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"y": list(mono), "u": q, "c": str(c)}
                for (mono, q), c in sorted(self.terms.items())
            ]
        }


def _act_jet_term(mu: JetField, mono: tuple[int, ...], q: int, ctx: RudContext) -> RudElement:
    if any(mono):
        j = next(i for i, e in enumerate(mono) if e)
        lower = mono[:j] + (mono[j] - 1,) + mono[j + 1 :]
        inner = _act_jet_term(mu, lower, q, ctx).shift_y(j)
        correction = _act_jet_term(-mu.partial(j), lower, q, ctx)
        return inner + correction
    # base case on 1 (x) u_q
    out: dict = {}
    s = ctx.s
    level = ctx.U.level
    zero_mono = (0,) * s
    for i, comp in enumerate(mu.components):
        const = comp.constant_term()
        if const:
            e_i = tuple(1 if j == i else 0 for j in range(s))
            key = (e_i, q)
            out[key] = out.get(key, Fraction(0)) + const
        for exps, coeff in comp.coeffs.items():
            deg = sum(exps)
            if 1 <= deg <= level:
                mat = ctx.U.matrix(LBasis(exps, i))
                for m in range(ctx.U.dim):
                    if mat[m][q]:
                        key = (zero_mono, m)
                        acc = out.get(key, Fraction(0)) + coeff * mat[m][q]
                        if acc:
                            out[key] = acc
                        else:
                            out.pop(key, None)
    return RudElement(ctx, out)


def _act_jetfield(mu: JetField, v: RudElement) -> RudElement:
    out = v.ctx.zero()
    for (mono, q), c in v.terms.items():
        out = out + _act_jet_term(mu, mono, q, v.ctx) * c
    return out


def required_order(v: RudElement) -> int:
    return v.y_degree() + v.ctx.U.level + 1


def rud_act_field(eta: VectorField, v: RudElement, ctx: RudContext | None = None,
                  order_bump: int = 0) -> RudElement:
    """Action of a vector field, with a built-in truncation stability check."""
    ctx = ctx or v.ctx
    if ctx is not v.ctx:
        raise StructuralError("context mismatch")
    n = required_order(v) + order_bump
    mu = embed_field(eta, ctx.chart, ctx.point, n)
    result = _act_jetfield(mu, v)
    mu_hi = embed_field(eta, ctx.chart, ctx.point, n + 1)
    recheck = _act_jetfield(mu_hi, v)
    if result != recheck:
        raise WorkbenchError(
            "field action changed under a finer truncation; order bound is wrong"
        )
    return result


def rud_act_function(f, v: RudElement, ctx: RudContext | None = None) -> RudElement:
    """Action of a function: Taylor coefficients against -d/dy powers."""
    ctx = ctx or v.ctx
    if ctx is not v.ctx:
        raise StructuralError("context mismatch")
    if not isinstance(f, LocalElement):
        f = ctx.chart.local(f)
    series = taylor_expand(f, ctx.chart, ctx.point, v.y_degree() + 1)
    out = ctx.zero()
    for alpha, coeff in series.coeffs.items():
        piece = v
        sign = 1
        for k, e in enumerate(alpha):
            for _ in range(e):
                piece = piece.dy(k)
                sign = -sign
            if piece.is_zero():
                break
        if not piece.is_zero():
            out = out + piece * (coeff * sign)
    return out


def apply_word(letters: Sequence, v: RudElement) -> RudElement:
    """Apply operator letters right to left (the last letter acts first)."""
    for letter in reversed(letters):
        if isinstance(letter, VectorField):
            v = rud_act_field(letter, v)
        else:
            v = rud_act_function(letter, v)
    return v


def reduction_extract(v: RudElement, ctx: RudContext | None = None) -> RudElement:
    """A nonzero element of 1 (x) U inside the function orbit of v.

    Finds a maximal-degree y-monomial (ties broken lexicographically)
    and applies the matching product of centered parameters; each
    parameter acts as -d/dy, so the chosen term survives with a
    factorial coefficient while everything else dies.
    """
    ctx = ctx or v.ctx
    if v.is_zero():
        raise ValueError("reduction needs a nonzero element")
    top = v.y_degree()
    candidates = [m for (m, _) in v.terms if sum(m) == top]
    target = max(candidates)
    out = v
    for k, e in enumerate(target):
        tbar = ctx.shifted_parameter(k)
        for _ in range(e):
            out = rud_act_function(tbar, out, ctx)
    if out.is_zero() or not out.in_vacuum():
        raise WorkbenchError("reduction did not land in 1 (x) U; engine defect")
    return out


def random_element(ctx: RudContext, rng: random.Random, max_level: int,
                   terms: int = 3) -> RudElement:
    out: dict = {}
    for _ in range(terms):
        mono = [0] * ctx.s
        for _ in range(rng.randint(0, max_level)):
            mono[rng.randrange(ctx.s)] += 1
        q = rng.randrange(ctx.U.dim)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            key = (tuple(mono), q)
            out[key] = out.get(key, Fraction(0)) + c
    return RudElement(ctx, {k: c for k, c in out.items() if c})


def _random_vanishing_function(ctx: RudContext, rng: random.Random, power: int):
    """A random element of the maximal ideal power m_p^power (power >= 1)."""
    chart = ctx.chart
    f = chart.one()
    for _ in range(power):
        k = rng.randrange(ctx.s)
        factor = chart.local(ctx.shifted_parameter(k))
        f = f * factor
    scale = Fraction(rng.randint(1, 3))
    return f * scale


def filtration_checks(ctx: RudContext, depth: int, seed: int = 0, samples: int = 20) -> dict:
    """Exercise the level-drop laws of the module filtration.

    Checks, on random elements of level <= depth: multiplication by a
    centered parameter drops the level; fields vanishing to order j+1
    at the point drop it by j; parameters to the power depth+1 and
    order-one fields composed depth+1 times annihilate.  Violations are
    engine defects and reported as failures.
    """
    rng = random.Random(seed)
    records = []

    def record(name, ok, witness=None):
        records.append({"name": name, "status": "pass" if ok else "fail", "witness": witness})

    for trial in range(samples):
        v = random_element(ctx, rng, depth)
        if v.is_zero():
            continue
        lvl = v.y_degree()
        # (a) centered parameters drop the level
        k = rng.randrange(ctx.s)
        dropped = rud_act_function(ctx.shifted_parameter(k), v, ctx)
        record(
            f"maximal-ideal drop #{trial}",
            dropped.is_zero() or dropped.y_degree() <= max(lvl - 1, 0),
            {"level": lvl, "result_level": dropped.y_degree()},
        )
        # (b) fields of filtration level j raise the level by at most -j
        j = rng.randint(-1, min(2, depth))
        i = rng.randrange(ctx.s)
        lift = truncated_lift(ctx.chart, ctx.point, i, depth + ctx.U.level + 2)
        eta = lift if j < 0 else _scale_field(ctx, rng, lift, j + 1)
        acted = rud_act_field(eta, v, ctx)
        bound = lvl - j
        record(
            f"filtration drop #{trial} (j={j})",
            acted.is_zero() or acted.y_degree() <= bound,
            {"level": lvl, "j": j, "result_level": acted.y_degree()},
        )
    # local nilpotency witnesses at the full depth
    v = ctx.vacuum(0)
    for _ in range(depth):
        v = v.shift_y(rng.randrange(ctx.s))
    w = v
    for _ in range(depth + 1):
        w = rud_act_function(ctx.shifted_parameter(rng.randrange(ctx.s)), w, ctx)
    record("parameters locally nilpotent", w.is_zero(), {"depth": depth})
    w = v
    annihilated = False
    for _ in range(depth + 1):
        i = rng.randrange(ctx.s)
        lift = truncated_lift(ctx.chart, ctx.point, i, depth + ctx.U.level + 2)
        eta = _scale_field(ctx, rng, lift, 2)
        w = rud_act_field(eta, w, ctx)
        if w.is_zero():
            annihilated = True
            break
    record("order-one fields locally nilpotent", annihilated or w.is_zero(), {"depth": depth})
    status = "pass" if all(r["status"] == "pass" for r in records) else "fail"
    return {"status": status, "records": records}


def _scale_field(ctx: RudContext, rng: random.Random, eta: VectorField, power: int) -> VectorField:
    """Multiply a field by a random element of m_p^power."""
    v = ctx.chart.variety
    f = v.ideal.element(1)
    for _ in range(power):
        k = rng.randrange(ctx.s)
        f = f * ctx.shifted_parameter(k)
    return eta * f
