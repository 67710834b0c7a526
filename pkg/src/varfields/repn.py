"""Finite-dimensional modules over the non-negative part of the graded
algebra of polynomial derivations in s variables.

Basis elements are X^k d/dX_i with |k| >= 1, graded so that the degree
of X^k d/dX_i is |k| - 1.  A module of nilpotency level l is given by
exact action matrices for every basis element of degree below l; higher
degrees act as zero.  Degree-zero elements X_j d/dX_i realize the
elementary matrix E_ji, which hooks these modules into the gl_s world
of the classical constructions (natural, dual, symmetric and exterior
powers, and the one-dimensional trace twists).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from varfields import linalg
from varfields.errors import StructuralError


class LBasis:
    """The derivation X^exps d/dX_direction, of degree sum(exps) - 1."""

    __slots__ = ("exps", "direction")

    def __init__(self, exps: Sequence[int], direction: int):
        self.exps = tuple(int(e) for e in exps)
        if any(e < 0 for e in self.exps) or sum(self.exps) < 1:
            raise ValueError(f"exponent tuple {exps!r} must have total degree >= 1")
        if not 0 <= direction < len(self.exps):
            raise ValueError(f"direction {direction} out of range")
        self.direction = direction

    @property
    def degree(self) -> int:
        return sum(self.exps) - 1

    def __eq__(self, other):
        return (
            isinstance(other, LBasis)
            and self.exps == other.exps
            and self.direction == other.direction
        )

    def __hash__(self):
        return hash((self.exps, self.direction))

    def __repr__(self):
        var = "*".join(
            f"X{i + 1}" if e == 1 else f"X{i + 1}^{e}"
            for i, e in enumerate(self.exps)
            if e
        )
        return f"{var}*d/dX{self.direction + 1}"


def bracket_terms(a: LBasis, b: LBasis) -> list[tuple[Fraction, LBasis]]:
    """[X^a d/dX_i, X^b d/dX_j] expanded in the monomial basis."""
    out = []
    # X^a d_i (X^b) d_j  - with the coefficient b_i
    if b.exps[a.direction]:
        exps = list(a.exps)
        for k, e in enumerate(b.exps):
            exps[k] += e
        exps[a.direction] -= 1
        out.append((Fraction(b.exps[a.direction]), LBasis(exps, b.direction)))
    if a.exps[b.direction]:
        exps = list(b.exps)
        for k, e in enumerate(a.exps):
            exps[k] += e
        exps[b.direction] -= 1
        out.append((Fraction(-a.exps[b.direction]), LBasis(exps, a.direction)))
    return out


def basis_below_level(s: int, level: int) -> list[LBasis]:
    """All X^k d/dX_i with degree < level, i.e. 1 <= |k| <= level."""
    out = []

    def monos(total: int, vars_left: int):
        if vars_left == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for tail in monos(total - head, vars_left - 1):
                yield (head,) + tail

    for total in range(1, level + 1):
        for mono in monos(total, s):
            for i in range(s):
                out.append(LBasis(mono, i))
    return out


class FiniteModule:
    """Action matrices on a fixed basis for every generator of degree < level.

    Matrices act on column vectors: (rho(a) u_q) = sum_m rho(a)[m][q] u_m.
    Missing basis elements act as zero.
    """

    def __init__(
        self,
        s: int,
        dim: int,
        level: int,
        action: dict[LBasis, list[list[Fraction]]],
        labels: Sequence[str] | None = None,
    ):
        if level < 1:
            raise ValueError("nilpotency level must be at least 1")
        self.s = s
        self.dim = dim
        self.level = level
        self.action = {}
        for key, mat in action.items():
            if key.degree >= level:
                raise StructuralError(
                    f"action supplied for {key!r} of degree {key.degree} >= level {level}"
                )
            if len(mat) != dim or any(len(row) != dim for row in mat):
                raise StructuralError(f"matrix for {key!r} is not {dim} x {dim}")
            mat = [[Fraction(x) for x in row] for row in mat]
            if not linalg.mat_is_zero(mat):
                self.action[key] = mat
        self.labels = tuple(labels) if labels else tuple(f"u_{q + 1}" for q in range(dim))

    def matrix(self, element: LBasis) -> list[list[Fraction]]:
        """rho(element); zero for degree >= level or unhoused generators."""
        if element.degree >= self.level:
            return linalg.frac_zero(self.dim, self.dim)
        found = self.action.get(element)
        return found if found is not None else linalg.frac_zero(self.dim, self.dim)

    def gl_matrix(self, k: int, i: int) -> list[list[Fraction]]:
        """rho(E_ki), the degree-zero element X_k d/dX_i."""
        exps = tuple(1 if j == k else 0 for j in range(self.s))
        return self.matrix(LBasis(exps, i))

    def apply(self, element: LBasis, vec: Sequence[Fraction]) -> list[Fraction]:
        mat = self.matrix(element)
        return [
            sum((mat[m][q] * vec[q] for q in range(self.dim)), Fraction(0))
            for m in range(self.dim)
        ]

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "dimension": self.dim,
            "level": self.level,
            "labels": list(self.labels),
            "action": [
                {
                    "exps": list(key.exps),
                    "direction": key.direction,
                    "matrix": [[str(x) for x in row] for row in mat],
                }
                for key, mat in sorted(
                    self.action.items(), key=lambda kv: (kv[0].exps, kv[0].direction)
                )
            ],
        }

    def __repr__(self):
        return f"FiniteModule<dim {self.dim}, s {self.s}, level {self.level}>"


class DualModule(FiniteModule):
    """The dual module: every generator acts by negative transpose."""

    def __init__(self, primal: FiniteModule, point=None):
        action = {
            key: linalg.mat_neg(linalg.mat_transpose(mat))
            for key, mat in primal.action.items()
        }
        super().__init__(
            primal.s,
            primal.dim,
            primal.level,
            action,
            labels=tuple(f"{lab}*" for lab in primal.labels),
        )
        self.primal = primal
        self.point = point


def check_homomorphism(module: FiniteModule, witness: bool = False):
    """Verify rho is a Lie homomorphism on all housed basis pairs.

    Brackets are expanded in the monomial basis; terms of degree >=
    level map to zero.  With ``witness=True`` returns (bool, failing
    pair or None) instead of just the bool.
    """
    elements = basis_below_level(module.s, module.level)
    for a in elements:
        ra = module.matrix(a)
        for b in elements:
            rb = module.matrix(b)
            lhs = linalg.frac_zero(module.dim, module.dim)
            for coeff, term in bracket_terms(a, b):
                if term.degree < module.level:
                    lhs = linalg.mat_add(lhs, linalg.mat_scale(module.matrix(term), coeff))
            rhs = linalg.mat_commutator(ra, rb)
            if not linalg.mat_eq(lhs, rhs):
                return (False, (a, b)) if witness else False
    return (True, None) if witness else True


def _sym_basis(s: int, power: int) -> list[tuple[int, ...]]:
    def monos(total: int, vars_left: int):
        if vars_left == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for tail in monos(total - head, vars_left - 1):
                yield (head,) + tail

    return list(monos(power, s))


def gl_family(kind: str, s: int, alpha=None, power: int | None = None) -> FiniteModule:
    """Built-in level-one module families over the degree-zero part.

    ``one_dim``: the trace character normalized so the identity matrix
    acts as ``alpha`` (each E_ii acts as alpha / s).  ``natural`` and
    ``dual_natural``: the defining representation and its dual.
    ``sym``/``ext``: induced actions on symmetric respectively exterior
    powers of the natural module, with ``power`` the exponent.
    """
    if s < 1:
        raise ValueError("s must be positive")

    def unit(k: int, i: int) -> LBasis:
        return LBasis(tuple(1 if j == k else 0 for j in range(s)), i)

    action: dict[LBasis, list[list[Fraction]]] = {}
    if kind == "one_dim":
        if alpha is None:
            raise ValueError("one_dim needs the scalar alpha")
        alpha = Fraction(alpha)
        for k in range(s):
            action[unit(k, k)] = [[alpha / s]]
        return FiniteModule(s, 1, 1, action, labels=("u",))

    if kind == "natural":
        for k in range(s):
            for i in range(s):
                mat = linalg.frac_zero(s, s)
                mat[k][i] = Fraction(1)
                action[unit(k, i)] = mat
        return FiniteModule(s, s, 1, action, labels=tuple(f"e_{q + 1}" for q in range(s)))

    if kind == "dual_natural":
        return DualModule(gl_family("natural", s))

    if kind == "sym":
        if power is None or power < 1:
            raise ValueError("sym needs a positive power")
        basis = _sym_basis(s, power)
        index = {m: q for q, m in enumerate(basis)}
        dim = len(basis)
        for k in range(s):
            for i in range(s):
                # E_ki acts as x_k d/dx_i on monomials of degree ``power``
                mat = linalg.frac_zero(dim, dim)
                for q, mono in enumerate(basis):
                    if mono[i]:
                        target = list(mono)
                        target[i] -= 1
                        target[k] += 1
                        mat[index[tuple(target)]][q] = Fraction(mono[i])
                action[unit(k, i)] = mat
        labels = tuple(
            "*".join(f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}" for j, e in enumerate(m) if e)
            for m in basis
        )
        return FiniteModule(s, dim, 1, action, labels=labels)

    if kind == "ext":
        if power is None or not 1 <= power <= s:
            raise ValueError(f"ext power must lie in 1..{s}")
        basis = list(combinations(range(s), power))
        index = {b: q for q, b in enumerate(basis)}
        dim = len(basis)
        for k in range(s):
            for i in range(s):
                mat = linalg.frac_zero(dim, dim)
                for q, subset in enumerate(basis):
                    if i not in subset:
                        continue
                    if k != i and k in subset:
                        continue
                    replaced = [k if x == i else x for x in subset]
                    sorted_set = tuple(sorted(replaced))
                    # sign of the sort permutation
                    inversions = sum(
                        1
                        for a in range(len(replaced))
                        for b in range(a + 1, len(replaced))
                        if replaced[a] > replaced[b]
                    )
                    sign = Fraction(-1) ** inversions
                    mat[index[sorted_set]][q] += sign
                action[unit(k, i)] = mat
        labels = tuple(
            "^".join(f"e{j + 1}" for j in subset) for subset in basis
        )
        return FiniteModule(s, dim, 1, action, labels=labels)

    raise ValueError(f"unknown module family {kind!r}")


def dualize(module: FiniteModule, point=None) -> DualModule:
    """Dual module with the negative-transpose action."""
    return DualModule(module, point)


def module_from_json(data: dict) -> FiniteModule:
    action = {}
    for rec in data.get("action", []):
        key = LBasis(tuple(rec["exps"]), int(rec["direction"]))
        action[key] = [[Fraction(x) for x in row] for row in rec["matrix"]]
    return FiniteModule(
        int(data["s"]),
        int(data["dimension"]),
        int(data["level"]),
        action,
        labels=data.get("labels"),
    )
