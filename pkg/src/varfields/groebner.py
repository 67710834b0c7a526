"""Buchberger's algorithm, normal forms and quotient-ring elements.

The reduced Groebner basis of an ideal is unique for a fixed monomial
order, so normal forms give canonical representatives in the quotient
ring and equality there is plain representative equality.  Plain
Buchberger with the two classical pair-elimination criteria is entirely
adequate for the desk-scale ideals this workbench targets (few
variables, low degree).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from varfields import kernels
from varfields.errors import StructuralError
from varfields.poly import MonomialOrder, PolyRing, Polynomial


def divmod_multi(f: Polynomial, divisors: Sequence[Polynomial]):
    """Multivariate division of ``f`` by an ordered list of divisors.

    Returns ``(quotients, remainder)`` with
    ``f = sum(q*d for q, d in zip(quotients, divisors)) + remainder``
    and no remainder term divisible by any divisor's leading monomial.
    """
    ring = f.ring
    order = ring.order
    lead = [(d.leading_monomial(), d.leading_coefficient(), d) for d in divisors]
    quotients = [{} for _ in divisors]
    remainder = {}
    work = dict(f.terms)
    while work:
        m = order.leading(work)
        c = work[m]
        for idx, (lm, lc, d) in enumerate(lead):
            if kernels.mono_divides(lm, m):
                qm = kernels.mono_div(m, lm)
                qc = c / lc
                quotients[idx][qm] = quotients[idx].get(qm, Fraction(0)) + qc
                work = kernels.tmap_sub(work, kernels.tmap_mul_term(d.terms, qm, qc))
                break
        else:
            remainder[m] = c
            del work[m]
    return (
        [Polynomial(ring, {m: c for m, c in q.items() if c}) for q in quotients],
        Polynomial(ring, remainder),
    )


def reduce_poly(f: Polynomial, divisors: Sequence[Polynomial]) -> Polynomial:
    return divmod_multi(f, divisors)[1] if divisors else f


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = kernels.mono_lcm(lf, lg)
    ring = f.ring
    tf = Polynomial(ring, kernels.tmap_mul_term(f.terms, kernels.mono_div(lcm, lf), 1 / f.leading_coefficient()))
    tg = Polynomial(ring, kernels.tmap_mul_term(g.terms, kernels.mono_div(lcm, lg), 1 / g.leading_coefficient()))
    return tf - tg


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``gens`` must contain at least one nonzero polynomial.  If ``order``
    is given the generators are recreated in a ring with that order.
    The result is monic, autoreduced and sorted leading-monomial
    descending, hence canonical.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = PolyRing(ring.variables, order)
        gens = [Polynomial(ring, dict(g.terms)) for g in gens]

    basis = [g.monic() for g in gens]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done = set()

    def pair_key(p):
        lcm = kernels.mono_lcm(basis[p[0]].leading_monomial(), basis[p[1]].leading_monomial())
        return (kernels.mono_deg(lcm), ring.order.key(lcm))

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        done.add((i, j))
        li, lj = basis[i].leading_monomial(), basis[j].leading_monomial()
        lcm = kernels.mono_lcm(li, lj)
        # first Buchberger criterion: coprime leading monomials
        if lcm == kernels.mono_mul(li, lj):
            continue
        # chain criterion: some treated basis element divides the lcm
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if kernels.mono_divides(basis[k].leading_monomial(), lcm):
                ik = (min(i, k), max(i, k))
                jk = (min(j, k), max(j, k))
                if ik in done and jk in done:
                    skip = True
                    break
        if skip:
            continue
        r = reduce_poly(s_polynomial(basis[i], basis[j]), basis)
        if not r.is_zero():
            basis.append(r.monic())
            t = len(basis) - 1
            pairs.update((k, t) for k in range(t))

    # minimalize: drop elements whose lead is divisible by another lead
    basis.sort(key=lambda p: ring.order.key(p.leading_monomial()))
    minimal: list[Polynomial] = []
    for g in basis:
        lm = g.leading_monomial()
        if not any(kernels.mono_divides(h.leading_monomial(), lm) for h in minimal):
            minimal.append(g)
    # autoreduce tails
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        reduced.append(reduce_poly(g, others).monic())
    reduced.sort(key=lambda p: ring.order.key(p.leading_monomial()), reverse=True)
    return reduced


class Ideal:
    """An ideal of a polynomial ring with a cached reduced basis.

    The zero ideal (no generators) is allowed; its basis is empty and
    normal forms are the identity.
    """

    __slots__ = ("ring", "generators", "_basis", "_hash")

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial]):
        self.ring = ring
        for g in generators:
            if g.ring != ring:
                raise StructuralError("ideal generator from a different ring")
        self.generators = tuple(generators)
        self._basis: tuple[Polynomial, ...] | None = None
        self._hash: int | None = None

    @property
    def groebner_basis(self) -> tuple[Polynomial, ...]:
        if self._basis is None:
            nonzero = [g for g in self.generators if not g.is_zero()]
            self._basis = tuple(buchberger(nonzero)) if nonzero else ()
        return self._basis

    def reduce(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            raise StructuralError("polynomial from a different ring")
        basis = self.groebner_basis
        return reduce_poly(p, basis) if basis else p

    def contains(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def is_proper(self) -> bool:
        return not self.contains(self.ring.one())

    def element(self, p) -> "QuotientElement":
        if isinstance(p, (int, Fraction)):
            p = self.ring.const(p)
        elif isinstance(p, str):
            p = self.ring.from_string(p)
        return QuotientElement(self, self.reduce(p))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner_basis == other.groebner_basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.groebner_basis))
        return self._hash

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal<{gens}>"


def normal_form(p: Polynomial, ideal: Ideal) -> "QuotientElement":
    return ideal.element(p)


def ideal_contains(p: Polynomial, ideal: Ideal) -> bool:
    return ideal.contains(p)


def _same_ideal(a: "QuotientElement", b: "QuotientElement") -> Ideal:
    if a.ideal is b.ideal or a.ideal == b.ideal:
        return a.ideal
    raise StructuralError("quotient elements modulo different ideals")


class QuotientElement:
    """Canonical residue class: its representative equals its own normal form."""

    __slots__ = ("ideal", "rep")

    def __init__(self, ideal: Ideal, rep: Polynomial):
        self.ideal = ideal
        self.rep = rep

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _same_ideal(self, other)
        return QuotientElement(self.ideal, self.ideal.reduce(self.rep + other.rep))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _same_ideal(self, other)
        return QuotientElement(self.ideal, self.ideal.reduce(self.rep - other.rep))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return QuotientElement(self.ideal, -self.rep)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuotientElement(self.ideal, self.rep * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _same_ideal(self, other)
        return QuotientElement(self.ideal, self.ideal.reduce(self.rep * other.rep))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ideal.element(1)
        for _ in range(n):
            out = out * self
        return out

    def _coerce(self, other):
        if isinstance(other, QuotientElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ideal.element(other)
        if isinstance(other, Polynomial):
            return self.ideal.element(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.rep == other
        if isinstance(other, QuotientElement):
            _same_ideal(self, other)
            return self.rep == other.rep
        return NotImplemented

    def __hash__(self):
        return hash((self.ideal, self.rep))

    def __bool__(self):
        return not self.rep.is_zero()

    def evaluate(self, point) -> Fraction:
        return self.rep.evaluate(point)

    def partial_derivative(self, i: int) -> "QuotientElement":
        """Ambient formal partial of the canonical representative."""
        return self.ideal.element(self.rep.partial_derivative(i))

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"[{self.rep}]"
