"""The rank-one family on the circle, modeled on Laurent polynomials.

The coordinate ring is k[t, 1/t] and the vector fields are spanned by
e_k = t^(k+1) d/dt.  For each weight alpha the module F_alpha has basis
{v_s} with

    t^k . v_s = v_{s+k}          e_k . v_s = (s + alpha k) v_{s+k},

realized here on a finite index window; actions that would leave the
window raise so that callers can enlarge it.  The dual module with
values in the coordinate ring is computed from first principles via
(eta . phi)(m) = -phi(eta . m) + eta(phi(m)) and compared against the
weight-negated family.

An exact polynomial model of the same algebra lives on the hyperbola
x*y = 1 (where t = x and 1/t = y); ``laurent_model_check`` verifies for
integer weights that the closed-form family matches the gauge action
there.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from varfields.errors import WindowOverflowError, WorkbenchError


class Laurent:
    """A Laurent polynomial as an int -> Fraction coefficient map."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {int(k): Fraction(c) for k, c in (coeffs or {}).items() if c}

    @classmethod
    def t_power(cls, k: int, coeff=1) -> "Laurent":
        return cls({k: Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            acc = out.get(k, Fraction(0)) + c
            if acc:
                out[k] = acc
            else:
                out.pop(k, None)
        return Laurent(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Laurent({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Laurent({k: c * other for k, c in self.coeffs.items()})
        out: dict[int, Fraction] = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                k = ka + kb
                acc = out.get(k, Fraction(0)) + ca * cb
                if acc:
                    out[k] = acc
                else:
                    out.pop(k, None)
        return Laurent(out)

    __rmul__ = __mul__

    def derivative(self) -> "Laurent":
        return Laurent({k - 1: c * k for k, c in self.coeffs.items() if k})

    def field_apply(self, k: int) -> "Laurent":
        """e_k(self) = t^(k+1) * d/dt."""
        return Laurent.t_power(k + 1) * self.derivative()

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*t^{k}" for k, c in sorted(self.coeffs.items()))


class CircleElement:
    """A finite combination of the basis vectors v_s inside the window."""

    __slots__ = ("family", "coeffs")

    def __init__(self, family: "CircleFamily", coeffs: dict):
        for s in coeffs:
            family._check_index(s)
        self.family = family
        self.coeffs = {int(s): Fraction(c) for s, c in coeffs.items() if c}

    def __add__(self, other):
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            acc = out.get(s, Fraction(0)) + c
            if acc:
                out[s] = acc
            else:
                out.pop(s, None)
        return CircleElement(self.family, out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        return CircleElement(self.family, {s: c * scalar for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, CircleElement)
            and self.family is other.family
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*v_{s}" for s, c in sorted(self.coeffs.items()))


class CircleFamily:
    """The closed-form weight-alpha family on a finite index window."""

    def __init__(self, alpha, window: int = 16):
        self.alpha = Fraction(alpha)
        self.window = int(window)

    def _check_index(self, s: int):
        if abs(int(s)) > self.window:
            raise WindowOverflowError(int(s), self.window)

    def basis(self, s: int) -> CircleElement:
        self._check_index(s)
        return CircleElement(self, {s: Fraction(1)})

    def act_t(self, k: int, v: CircleElement) -> CircleElement:
        out: dict[int, Fraction] = {}
        for s, c in v.coeffs.items():
            self._check_index(s + k)
            out[s + k] = out.get(s + k, Fraction(0)) + c
        return CircleElement(self, out)

    def act_e(self, k: int, v: CircleElement) -> CircleElement:
        out: dict[int, Fraction] = {}
        for s, c in v.coeffs.items():
            self._check_index(s + k)
            coeff = c * (s + self.alpha * k)
            if coeff:
                out[s + k] = out.get(s + k, Fraction(0)) + coeff
        return CircleElement(self, out)

    def act_function(self, f: Laurent, v: CircleElement) -> CircleElement:
        out = CircleElement(self, {})
        for k, c in f.coeffs.items():
            out = out + self.act_t(k, v) * c
        return out


def circle_family(alpha, window: int = 16) -> CircleFamily:
    return CircleFamily(alpha, window)


class CircleDualElement:
    """A combination of the functionals phi_c with phi_c(v_s) = t^(s-c)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        self.coeffs = {int(c): Fraction(x) for c, x in coeffs.items() if x}

    def value_at(self, s: int) -> Laurent:
        out = Laurent()
        for c, x in self.coeffs.items():
            out = out + Laurent.t_power(s - c, x)
        return out

    def __eq__(self, other):
        return isinstance(other, CircleDualElement) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{x}*phi_{c}" for c, x in sorted(self.coeffs.items()))


def _dual_from_values(values: dict[int, Laurent], probe: int) -> CircleDualElement:
    """Recover phi-coordinates from the function values phi(v_s).

    phi = sum_c d_c phi_c satisfies phi(v_s) = sum_c d_c t^(s-c), so the
    coefficients can be read off the value at any single s = probe.
    """
    lp = values[probe]
    return CircleDualElement({probe - m: c for m, c in lp.coeffs.items()})


def circle_dual_act_e(family: CircleFamily, k: int, phi: CircleDualElement, check_range: Iterable[int]):
    """(e_k . phi) computed from the defining formula, on basis values.

    Uses (eta . phi)(v_s) = -phi(eta . v_s) + eta(phi(v_s)) for each s
    in the check range, then recovers the phi-coordinates and verifies
    consistency across the whole range.
    """
    check_range = list(check_range)
    values = {}
    for s in check_range:
        pulled = (s + family.alpha * k) * phi.value_at(s + k)
        values[s] = -pulled + phi.value_at(s).field_apply(k)
    result = _dual_from_values(values, check_range[0])
    for s in check_range:
        if result.value_at(s) != values[s]:
            raise WorkbenchError("dual action values are not of functional form")
    return result


def circle_dual_act_t(family: CircleFamily, m: int, phi: CircleDualElement, check_range: Iterable[int]):
    check_range = list(check_range)
    values = {s: phi.value_at(s + m) for s in check_range}
    result = _dual_from_values(values, check_range[0])
    for s in check_range:
        if result.value_at(s) != values[s]:
            raise WorkbenchError("dual action values are not of functional form")
    return result


def circle_dual_check(
    alpha,
    window: int = 8,
    candidate: str = "standard",
    op_bound: int = 3,
) -> bool:
    """Verify the dual of the weight-alpha family is the weight -alpha one.

    The candidate map sends the basis vector with index j of the
    negated-weight family to the functional phi_{-j}.  ``candidate``
    selects deliberate corruptions for negative controls:
    ``index_flipped`` uses phi_{+j}; ``sign_perturbed`` flips the sign
    on negative indices only.
    """
    alpha = Fraction(alpha)
    neg = CircleFamily(-alpha, window)
    fam = CircleFamily(alpha, window)
    idx_bound = max(1, window - 2 * op_bound)
    check_range = range(-idx_bound, idx_bound + 1)

    def image(j: int) -> CircleDualElement:
        if candidate == "standard":
            return CircleDualElement({-j: 1})
        if candidate == "index_flipped":
            return CircleDualElement({j: 1})
        if candidate == "sign_perturbed":
            return CircleDualElement({-j: -1 if j < 0 else 1})
        raise ValueError(f"unknown candidate {candidate!r}")

    def push(elem: CircleElement) -> CircleDualElement:
        out: dict[int, Fraction] = {}
        for j, c in elem.coeffs.items():
            for cc, x in image(j).coeffs.items():
                acc = out.get(cc, Fraction(0)) + c * x
                if acc:
                    out[cc] = acc
                else:
                    out.pop(cc, None)
        return CircleDualElement(out)

    for j in range(-idx_bound, idx_bound + 1):
        for k in range(-op_bound, op_bound + 1):
            lhs = push(neg.act_e(k, neg.basis(j)))
            rhs = circle_dual_act_e(fam, k, image(j), check_range)
            if lhs != rhs:
                return False
            lhs_t = push(neg.act_t(k, neg.basis(j)))
            rhs_t = circle_dual_act_t(fam, k, image(j), check_range)
            if lhs_t != rhs_t:
                return False
    return True


def laurent_model_check(alpha: int, index_bound: int = 3, op_bound: int = 3) -> bool:
    """Cross-check the closed form against the exact gauge action on the
    hyperbola x*y = 1, where t = x; integer weights only (t^alpha must
    be a genuine function).
    """
    from varfields.catalog import named_variety
    from varfields.gauge import GaugeModule, gauge_act
    from varfields.repn import gl_family
    from varfields.vfields import VectorField

    if alpha != int(alpha):
        raise ValueError("the polynomial model needs an integer weight")
    alpha = int(alpha)
    v = named_variety("hyperbola")
    chart = next(c for c in v.standard_atlas() if c.params == (0,))
    U = gl_family("one_dim", 1, alpha=alpha)
    M = GaugeModule(chart, U, name=f"F_{alpha} on x*y=1")

    def t_power(m: int):
        ring = v.ring
        return v.ideal.element(ring.gen(0) ** m if m >= 0 else ring.gen(1) ** (-m))

    def e_field(k: int) -> VectorField:
        return VectorField(v, [t_power(k + 1), -t_power(k - 1)])

    fam = CircleFamily(alpha, window=index_bound + op_bound + abs(alpha) + 2)
    for s in range(-index_bound, index_bound + 1):
        vs = M.basis_element(0, t_power(s - alpha))
        for k in range(-op_bound, op_bound + 1):
            got = gauge_act(e_field(k), vs, M)
            closed = fam.act_e(k, fam.basis(s))
            expected = M.zero()
            for idx, c in closed.coeffs.items():
                expected = expected + M.basis_element(0, t_power(idx - alpha)) * c
            if got != expected:
                return False
    return True
