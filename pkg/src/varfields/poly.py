"""Exact multivariate polynomials over the rationals.

Monomials are exponent tuples, polynomials are sparse term maps from
exponent tuples to nonzero :class:`fractions.Fraction` coefficients,
and every operation is exact.  A :class:`PolyRing` fixes the variable
names and the active monomial order; polynomials always carry their
ring and refuse mixed-ring arithmetic.

Text grammar (whitespace-insensitive, used by the parser and printer):

    poly   ::=  [sign] term { sign term }
    term   ::=  coeff | coeff '*' powers | powers
    powers ::=  var ['^' nat] { '*' var ['^' nat] }
    coeff  ::=  int | int '/' nat

Printing is canonical: terms are emitted leading-first in the ring's
monomial order and zero terms are never stored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from varfields import kernels
from varfields.errors import ParseError, StructuralError

Rational = Fraction

_ORDER_KINDS = ("grevlex", "lex")


class MonomialOrder:
    """A multiplicative well-order on exponent tuples.

    ``kind`` is ``grevlex`` (graded reverse lexicographic, the default)
    or ``lex``; ``priority`` is a permutation of variable positions,
    highest priority first.  ``key`` returns a sort key under which
    ``max`` picks the leading monomial.
    """

    __slots__ = ("kind", "priority")

    def __init__(self, kind: str = "grevlex", priority: Sequence[int] | None = None, n: int | None = None):
        if kind not in _ORDER_KINDS:
            raise ValueError(f"unknown monomial order kind {kind!r}")
        self.kind = kind
        if priority is None:
            if n is None:
                raise ValueError("need either a priority permutation or the variable count")
            priority = tuple(range(n))
        self.priority = tuple(priority)
        if sorted(self.priority) != list(range(len(self.priority))):
            raise ValueError(f"priority {priority!r} is not a permutation")

    def key(self, mono: tuple[int, ...]):
        p = self.priority
        if self.kind == "lex":
            return tuple(mono[i] for i in p)
        # grevlex: higher degree wins; ties go to the monomial whose
        # last (lowest-priority) differing exponent is smaller.
        return (sum(mono), tuple(-mono[i] for i in reversed(p)))

    def leading(self, terms: dict) -> tuple[int, ...]:
        return max(terms, key=self.key)

    def sorted_monomials(self, monos: Iterable[tuple[int, ...]], reverse: bool = True):
        return sorted(monos, key=self.key, reverse=reverse)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.priority == other.priority
        )

    def __hash__(self):
        return hash((self.kind, self.priority))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, priority={self.priority})"


class PolyRing:
    """Polynomial ring QQ[variables] with a fixed monomial order."""

    __slots__ = ("variables", "order", "_var_index")

    def __init__(self, variables: Sequence[str], order: MonomialOrder | str = "grevlex"):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {variables!r}")
        if isinstance(order, str):
            order = MonomialOrder(order, n=len(self.variables))
        if len(order.priority) != len(self.variables):
            raise ValueError("order priority length does not match variable count")
        self.order = order
        self._var_index = {v: i for i, v in enumerate(self.variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, i: int) -> "Polynomial":
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: Fraction(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent tuple {exps!r} for {self.nvars} variables")
        coeff = Fraction(coeff)
        if not coeff:
            return self.zero()
        return Polynomial(self, {exps: coeff})

    def poly(self, terms: dict) -> "Polynomial":
        clean = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                m = tuple(int(e) for e in m)
                if len(m) != self.nvars or any(e < 0 for e in m):
                    raise ValueError(f"bad exponent tuple {m!r}")
                clean[m] = clean.get(m, Fraction(0)) + c
        return Polynomial(self, {m: c for m, c in clean.items() if c})

    def from_string(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.variables)!r}, {self.order.kind!r})"


def _coerce(ring: PolyRing, value) -> "Polynomial":
    if isinstance(value, Polynomial):
        if value.ring is not ring and value.ring != ring:
            raise StructuralError(
                f"polynomials live in different rings: {value.ring!r} vs {ring!r}"
            )
        return value
    if isinstance(value, (int, Fraction)):
        return ring.const(value)
    return NotImplemented  # type: ignore[return-value]


class Polynomial:
    """Immutable sparse polynomial; never stores a zero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.ring.order.leading(self.terms)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        order = self.ring.order
        return [(m, self.terms[m]) for m in order.sorted_monomials(self.terms)]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return Polynomial(self.ring, kernels.tmap_scale(self.terms, 1 / lc))

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        other = _coerce(self.ring, other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(self.ring, kernels.tmap_add(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(self.ring, other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(self.ring, kernels.tmap_sub(self.terms, other.terms))

    def __rsub__(self, other):
        other = _coerce(self.ring, other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(self.ring, kernels.tmap_sub(other.terms, self.terms))

    def __neg__(self):
        return Polynomial(self.ring, kernels.tmap_neg(self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.ring, kernels.tmap_scale(self.terms, Fraction(other)))
        other = _coerce(self.ring, other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(self.ring, kernels.tmap_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation -------------------------------------

    def partial_derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to the i-th variable."""
        if not 0 <= i < self.ring.nvars:
            raise ValueError(f"variable index {i} out of range")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                dm = m[:i] + (e - 1,) + m[i + 1 :]
                out[dm] = out.get(dm, Fraction(0)) + c * e
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.ring.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.ring.nvars}")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for x, e in zip(pt, m):
                if e:
                    val *= x**e
            total += val
        return total

    # -- printing ----------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<{format_polynomial(self)}>"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    names = p.ring.variables
    chunks = []
    for m, c in p.sorted_terms():
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, m)
            if e
        ]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        if not chunks:
            chunks.append(body if c > 0 else "-" + body)
        else:
            chunks.append(("+ " if c > 0 else "- ") + body)
    return " ".join(chunks)


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<number>\d+(?:/\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*^()])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
            break
        pos = m.end()
        if m.lastgroup == "number":
            tokens.append(("num", Fraction(m.group("number"))))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


def parse_polynomial(ring: PolyRing, text: str) -> Polynomial:
    """Parse the plain-text grammar into a polynomial of ``ring``.

    Supports signed terms like ``3/2*x^2*y - y + 1``; parentheses are
    accepted around a whole sub-polynomial with an optional exponent.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def parse_sum():
        nonlocal pos
        sign = 1
        kind, val = peek()
        if kind == "op" and val in "+-":
            pos += 1
            sign = -1 if val == "-" else 1
        acc = parse_product() * sign
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                pos += 1
                term = parse_product()
                acc = acc - term if val == "-" else acc + term
            else:
                return acc

    def parse_product():
        nonlocal pos
        acc = parse_power()
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                pos += 1
                acc = acc * parse_power()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                # implicit product such as "2x" or "x(y+1)"
                acc = acc * parse_power()
            else:
                return acc

    def parse_power():
        nonlocal pos
        base = parse_atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            pos += 1
            kind, val = peek()
            if kind != "num" or val.denominator != 1:
                raise ParseError("exponent must be a non-negative integer")
            pos += 1
            return base ** int(val)
        return base

    def parse_atom():
        nonlocal pos
        kind, val = peek()
        if kind == "num":
            pos += 1
            return ring.const(val)
        if kind == "name":
            pos += 1
            idx = ring._var_index.get(val)
            if idx is None:
                raise ParseError(f"unknown variable {val!r}; ring has {list(ring.variables)}")
            return ring.gen(idx)
        if kind == "op" and val == "(":
            pos += 1
            inner = parse_sum()
            kind, val = peek()
            if kind != "op" or val != ")":
                raise ParseError("unbalanced parenthesis")
            pos += 1
            return inner
        if kind == "op" and val == "-":
            pos += 1
            return -parse_atom()
        raise ParseError(f"unexpected token {val!r}")

    result = parse_sum()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens starting at {tokens[pos]!r}")
    return result
