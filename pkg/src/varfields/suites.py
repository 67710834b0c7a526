"""Seeded property suites behind the ``verify`` command and the
acceptance tests.

Each suite draws reproducible random samples (fields from the
constructor families times random functions, random module elements,
random operator words), checks the exact algebraic laws, and returns a
report whose records are sorted by name; identical seed and bounds give
byte-identical JSON.
"""

from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from varfields import kernels
from varfields.catalog import base_point, named_variety
from varfields.errors import AxiomViolationError, WorkbenchError
from varfields.gauge import (
    GaugeElement,
    GaugeModule,
    density_operator,
    density_sweep,
    function_act,
    gauge_act,
    sphere_chartfree_act,
    sphere_family,
    tensor_module,
)
from varfields.groebner import QuotientElement
from varfields.pairing import OperatorWord, PairingContext, pair, pair_rud, well_definedness_check
from varfields.repn import check_homomorphism, gl_family
from varfields.rudakov import (
    RudContext,
    filtration_checks,
    random_element as random_rud_element,
    reduction_extract,
    rud_act_field,
    rud_act_function,
)
from varfields.variety import LocalElement, Point, Variety
from varfields.vfields import (
    VectorField,
    chart_basic_field,
    delta_field,
    filtration_level,
    is_vector_field,
    truncated_lift,
)

ENGINE_VERSION = "0.1.0"


@dataclass
class CheckRecord:
    name: str
    law: str
    status: str  # pass / fail / inconclusive
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "law": self.law, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    records: list[CheckRecord] = field(default_factory=list)
    elapsed: float = 0.0

    def record(self, name: str, law: str, ok: bool, witness: dict | None = None):
        self.records.append(
            CheckRecord(name, law, "pass" if ok else "fail", witness)
        )

    @property
    def status(self) -> str:
        if any(r.status == "fail" for r in self.records):
            return "fail"
        if any(r.status == "inconclusive" for r in self.records):
            return "inconclusive"
        return "pass"

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "engine": {"version": ENGINE_VERSION, "kernel_backend": kernels.BACKEND},
            "status": self.status,
            "counts": self.counts,
            "elapsed_seconds": round(self.elapsed, 3),
            "records": [r.to_json() for r in sorted(self.records, key=lambda r: r.name)],
        }


class Sampler:
    """Reproducible random algebra data tied to one RNG."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def fraction(self, span: int = 4) -> Fraction:
        num = self.rng.randint(-span, span)
        den = self.rng.randint(1, 3)
        return Fraction(num, den)

    def polynomial(self, ring, max_degree: int = 3, terms: int = 3):
        p = ring.zero()
        for _ in range(self.rng.randint(1, terms)):
            mono = [0] * ring.nvars
            for _ in range(self.rng.randint(0, max_degree)):
                mono[self.rng.randrange(ring.nvars)] += 1
            p = p + ring.monomial(mono, self.fraction())
        return p

    def quotient(self, variety: Variety, max_degree: int = 3, terms: int = 3):
        return variety.ideal.element(self.polynomial(variety.ring, max_degree, terms))

    def local(self, chart, max_degree: int = 3, max_power: int = 1) -> LocalElement:
        return LocalElement(
            chart,
            self.quotient(chart.variety, max_degree),
            self.rng.randint(0, max_power),
        )

    def base_fields(self, variety: Variety) -> list[VectorField]:
        fields = []
        if len(variety.generators) == 1:
            for i in range(variety.n):
                for j in range(i + 1, variety.n):
                    fields.append(delta_field(variety, i, j))
        if not variety.generators:
            for i in range(variety.n):
                coeffs = [variety.ring.zero()] * variety.n
                coeffs[i] = variety.ring.one()
                fields.append(VectorField(variety, coeffs))
        for chart in variety.standard_atlas():
            for i in range(chart.s):
                fields.append(chart_basic_field(chart, i))
        return fields

    def vector_field(self, variety: Variety, max_degree: int = 2) -> VectorField:
        base = self.base_fields(variety)
        out = None
        for _ in range(self.rng.randint(1, 2)):
            f = self.quotient(variety, max_degree, terms=2)
            term = self.rng.choice(base) * f
            out = term if out is None else out + term
        return out

    def gauge_element(self, M: GaugeModule, max_degree: int = 3, max_power: int = 1) -> GaugeElement:
        coeffs = [self.local(M.chart, max_degree, max_power) for _ in range(M.dim)]
        return GaugeElement(M, coeffs)

    def functional(self, dim: int) -> list[Fraction]:
        phi = [self.fraction() for _ in range(dim)]
        if not any(phi):
            phi[0] = Fraction(1)
        return phi


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.monotonic()
        report = fn(*args, **kwargs)
        report.elapsed = time.monotonic() - start
        return report

    return wrapper


LIE_VARIETIES = ("sphere", "circle", "affine_line", "affine_plane")


@_timed
def lie_suite(seed: int = 0, samples: int = 200, max_degree: int = 3,
              varieties: Sequence[str] = LIE_VARIETIES) -> SuiteReport:
    """Jacobi identity, bracket closure and the Leibniz module law."""
    report = SuiteReport("lie", seed)
    sampler = Sampler(seed)
    names = list(varieties)
    for trial in range(samples):
        vname = names[trial % len(names)]
        variety = named_variety(vname)
        a = sampler.vector_field(variety)
        b = sampler.vector_field(variety)
        c = sampler.vector_field(variety)
        ab = a.bracket(b)
        report.record(
            f"closure {vname} #{trial:04d}",
            "[a,b] stays in Ker J",
            is_vector_field(ab.coeffs, variety),
        )
        jacobi = ab.bracket(c) + b.bracket(c).bracket(a) + c.bracket(a).bracket(b)
        report.record(
            f"jacobi {vname} #{trial:04d}",
            "[[a,b],c] + [[b,c],a] + [[c,a],b] = 0",
            jacobi.is_zero(),
        )
        f = sampler.quotient(variety, max_degree)
        lhs = a.bracket(b * f)
        rhs = b * a.apply(f) + a.bracket(b) * f
        report.record(
            f"leibniz {vname} #{trial:04d}",
            "[a, f b] = a(f) b + f [a,b]",
            lhs == rhs,
        )
    return report


def standard_gauge_modules(alphas: Sequence) -> list[tuple[str, GaugeModule]]:
    """The line modules and the sphere family at the given weights."""
    out = []
    line = named_variety("affine_line")
    for alpha in alphas:
        U = gl_family("one_dim", 1, alpha=Fraction(alpha))
        out.append((f"line alpha={alpha}", tensor_module(line.chart(0), U)))
    for alpha in alphas:
        out.append((f"sphere alpha={alpha}", sphere_family(Fraction(alpha))))
    return out


@_timed
def gauge_suite(seed: int = 0, samples: int = 100, max_degree: int = 4,
                alphas: Sequence = (0, 1, Fraction(1, 2), -1),
                extra_modules: Sequence[tuple[str, GaugeModule]] = ()) -> SuiteReport:
    """Gauge axioms, the action laws and the chart-independent formula."""
    report = SuiteReport("gauge", seed)
    sampler = Sampler(seed)
    modules = standard_gauge_modules(alphas) + list(extra_modules)
    for name, M in modules:
        ok = True
        witness = None
        try:
            M.field.validate()
        except AxiomViolationError as err:
            ok = False
            witness = err.witness
        report.record(f"axioms [{name}]", "gauge field commutant and flatness", ok, witness)
        report.record(
            f"module action [{name}]",
            "finite module is a Lie homomorphism",
            check_homomorphism(M.U),
        )
    per = max(1, samples // max(1, len(modules)))
    for name, M in modules:
        variety = M.variety
        for trial in range(per):
            a = sampler.vector_field(variety)
            b = sampler.vector_field(variety)
            v = sampler.gauge_element(M, max_degree=max_degree)
            lhs = gauge_act(a.bracket(b), v, M)
            rhs = gauge_act(a, gauge_act(b, v, M), M) - gauge_act(b, gauge_act(a, v, M), M)
            report.record(
                f"lie action [{name}] #{trial:04d}",
                "[a,b].v = a.(b.v) - b.(a.v)",
                lhs == rhs,
            )
            f = sampler.local(M.chart, max_degree=max_degree)
            compat_lhs = gauge_act(a, function_act(f, v), M)
            compat_rhs = function_act(a.apply_local(f), v) + function_act(f, gauge_act(a, v, M))
            report.record(
                f"compatibility [{name}] #{trial:04d}",
                "a.(f.v) = a(f).v + f.(a.v)",
                compat_lhs == compat_rhs,
            )
    # chart-independent formula on the sphere
    sphere = named_variety("sphere")
    sphere_mods = [(n, M) for n, M in modules if M.variety is sphere and M.dim == 1]
    pairs = [(0, 1), (1, 2), (2, 0)]
    for trial in range(samples):
        name, M = sphere_mods[trial % len(sphere_mods)]
        alpha = Fraction(name.split("=")[1])
        i, j = pairs[trial % len(pairs)]
        f = sampler.quotient(sphere, max_degree)
        g = sampler.quotient(sphere, max_degree)
        v = M.basis_element(0, g)
        eta = delta_field(sphere, i, j) * (f * Fraction(1, 2))
        lhs = gauge_act(eta, v, M)
        rhs = sphere_chartfree_act(f, i, j, v, alpha)
        report.record(
            f"chart-free [{name}] #{trial:04d}",
            "(f D_ij).(g x u) = f D_ij(g) x u + alpha g D_ij(f) x u",
            lhs == rhs,
        )
    return report


def standard_rud_contexts() -> list[tuple[str, RudContext]]:
    out = []
    line = named_variety("affine_line")
    lp = base_point("affine_line")
    out.append(
        ("line alpha=3/2", RudContext(lp.chart, lp, gl_family("one_dim", 1, alpha=Fraction(3, 2))))
    )
    sp = base_point("sphere")
    out.append(("sphere natural", RudContext(sp.chart, sp, gl_family("natural", 2))))
    out.append(
        ("sphere alpha=1", RudContext(sp.chart, sp, gl_family("one_dim", 2, alpha=1)))
    )
    return out


@_timed
def rudakov_suite(seed: int = 0, samples: int = 100, depth: int = 3) -> SuiteReport:
    """Action laws, the derivative rule for functions and level drops."""
    report = SuiteReport("rudakov", seed)
    sampler = Sampler(seed)
    contexts = standard_rud_contexts()
    # base cases
    for name, ctx in contexts:
        v = ctx.vacuum(0)
        lift = truncated_lift(ctx.chart, ctx.point, 0, ctx.U.level + 1)
        report.record(
            f"base lowering [{name}]",
            "a lift of d/dX_1 sends 1 x u to y_1 x u",
            rud_act_field(lift, v) == ctx.element({(tuple(1 if k == 0 else 0 for k in range(ctx.s)), 0): 1}),
        )
        deep = lift * (ctx.shifted_parameter(0) ** 2)
        report.record(
            f"base annihilation [{name}]",
            "fields vanishing to order two kill 1 x u",
            rud_act_field(deep, v).is_zero(),
        )
        y2 = ctx.vacuum(0).shift_y(0).shift_y(0)
        got = rud_act_function(ctx.shifted_parameter(0), y2, ctx)
        report.record(
            f"parameter derivative [{name}]",
            "t_k acts as -d/dy_k",
            got == y2.dy(0) * -1,
        )
    per = max(1, samples // max(1, len(contexts)))
    for name, ctx in contexts:
        variety = ctx.chart.variety
        for trial in range(per):
            v = random_rud_element(ctx, sampler.rng, max_level=depth)
            if v.is_zero():
                v = ctx.vacuum(0)
            a = sampler.vector_field(variety)
            b = sampler.vector_field(variety)
            lhs = rud_act_field(a.bracket(b), v)
            rhs = rud_act_field(a, rud_act_field(b, v)) - rud_act_field(b, rud_act_field(a, v))
            report.record(
                f"lie action [{name}] #{trial:04d}",
                "[a,b].v = a.(b.v) - b.(a.v)",
                lhs == rhs,
            )
            f = sampler.local(ctx.chart, max_degree=2)
            compat_lhs = rud_act_field(a, rud_act_function(f, v))
            compat_rhs = (
                rud_act_function(a.apply_local(f), v)
                + rud_act_function(f, rud_act_field(a, v))
            )
            report.record(
                f"compatibility [{name}] #{trial:04d}",
                "a.(f.v) = a(f).v + f.(a.v)",
                compat_lhs == compat_rhs,
            )
            stable = rud_act_field(a, v, order_bump=1) == rud_act_field(a, v, order_bump=2)
            report.record(
                f"truncation stability [{name}] #{trial:04d}",
                "results agree at orders N+1 and N+2",
                stable and rud_act_field(a, v) == rud_act_field(a, v, order_bump=1),
            )
    for name, ctx in contexts:
        rep = filtration_checks(ctx, depth=depth, seed=seed, samples=max(4, samples // 10))
        report.record(
            f"filtration drops [{name}]",
            "parameter and field actions drop levels as required",
            rep["status"] == "pass",
            None if rep["status"] == "pass" else rep,
        )
    return report


@_timed
def reduction_suite(seed: int = 0, samples: int = 50, max_level: int = 3) -> SuiteReport:
    """Every nonzero element reaches 1 x U through function actions."""
    report = SuiteReport("reduction", seed)
    sampler = Sampler(seed)
    contexts = standard_rud_contexts()
    for trial in range(samples):
        name, ctx = contexts[trial % len(contexts)]
        v = random_rud_element(ctx, sampler.rng, max_level=max_level)
        if v.is_zero():
            v = ctx.vacuum(0)
        try:
            u = reduction_extract(v, ctx)
            ok = (not u.is_zero()) and u.in_vacuum()
        except WorkbenchError:
            ok = False
        report.record(
            f"reduction [{name}] #{trial:04d}",
            "function orbit of v meets 1 x U in a nonzero element",
            ok,
        )
    return report


@_timed
def density_suite(seed: int = 0, samples: int = 100, sweeps: int = 20,
                  budget: int = 10000) -> SuiteReport:
    """Operator identity h x E_ij and the constructive density sweep."""
    report = SuiteReport("density", seed)
    sampler = Sampler(seed)
    sphere = named_variety("sphere")
    sp = base_point("sphere")
    natural = tensor_module(sphere.chart(2), gl_family("natural", 2))
    fam0 = sphere_family(0)
    fam1 = sphere_family(1)
    line = named_variety("affine_line")
    lp = base_point("affine_line")
    line_nat = tensor_module(lp.chart, gl_family("natural", 1))
    op_modules = [("sphere natural", natural, sp), ("sphere alpha=1", fam1, sp)]
    for trial in range(samples):
        name, M, pt = op_modules[trial % len(op_modules)]
        v = sampler.gauge_element(M, max_degree=2)
        i = sampler.rng.randrange(2)
        j = sampler.rng.randrange(2)
        try:
            density_operator(M, i, j, v)
            ok = True
        except AxiomViolationError:
            ok = False
        report.record(
            f"operator [{name}] #{trial:04d}",
            "commutator form equals h g x E_ij u",
            ok,
        )
    sweep_targets = [("sphere alpha=0", fam0, sp), ("sphere alpha=1", fam1, sp), ("line natural", line_nat, lp)]
    for trial in range(sweeps):
        name, M, pt = sweep_targets[trial % len(sweep_targets)]
        v = sampler.gauge_element(M, max_degree=2)
        if v.is_zero():
            v = M.basis_element(0, 1)
        res = density_sweep(M, v, pt, budget=budget)
        report.record(
            f"sweep [{name}] #{trial:04d}",
            "element drives h^N f (A x U) with f nonzero at the point",
            res.reached,
            None if res.reached else res.to_json(),
        )
    return report


def standard_pairing_contexts() -> list[tuple[str, PairingContext]]:
    out = []
    line = named_variety("affine_line")
    lp = base_point("affine_line")
    for alpha in (Fraction(1, 2), -1):
        M = tensor_module(lp.chart, gl_family("one_dim", 1, alpha=alpha))
        out.append((f"line alpha={alpha}", PairingContext(M, lp)))
    sp = base_point("sphere")
    for alpha in (0, Fraction(1, 2)):
        out.append((f"sphere alpha={alpha}", PairingContext(sphere_family(alpha), sp)))
    return out


def _random_word(sampler: Sampler, ctx: PairingContext, length: int) -> OperatorWord:
    letters = []
    variety = ctx.module.variety
    for _ in range(length):
        if sampler.rng.random() < 0.5:
            letters.append(sampler.quotient(variety, max_degree=2, terms=2))
        else:
            letters.append(sampler.vector_field(variety))
    return OperatorWord(letters)


def _equal_reduction_pair(sampler: Sampler, ctx: PairingContext, word: OperatorWord):
    """Two distinct words guaranteed to have the same induced reduction."""
    letters = list(word.letters)
    choice = sampler.rng.randrange(3)
    variety = ctx.module.variety
    if choice == 0 and len(letters) >= 2:
        # merge two adjacent function letters if possible
        for idx in range(len(letters) - 1):
            a, b = letters[idx], letters[idx + 1]
            if not isinstance(a, VectorField) and not isinstance(b, VectorField):
                merged = letters[:idx] + [a * b] + letters[idx + 2 :]
                return word, OperatorWord(merged)
    if choice == 1:
        # the same constant letter commutes to any position
        const = variety.ideal.element(abs(sampler.fraction(span=3)) + 1)
        pos1 = sampler.rng.randrange(len(letters) + 1)
        pos2 = sampler.rng.randrange(len(letters) + 1)
        w1 = list(letters)
        w1.insert(pos1, const)
        w2 = list(letters)
        w2.insert(pos2, const)
        return OperatorWord(w1), OperatorWord(w2)
    # the identity function letter is invisible
    return word, OperatorWord(letters + [variety.ideal.element(1)])


@_timed
def pairing_suite(seed: int = 0, samples: int = 100) -> SuiteReport:
    """Adjointness of the pairing and its well-definedness."""
    report = SuiteReport("pairing", seed)
    sampler = Sampler(seed)
    contexts = standard_pairing_contexts()
    per = max(1, samples // len(contexts))
    for name, ctx in contexts:
        M = ctx.module
        variety = M.variety
        for trial in range(per):
            m = sampler.gauge_element(M, max_degree=2, max_power=0)
            word = _random_word(sampler, ctx, sampler.rng.randint(0, 2))
            phi = sampler.functional(ctx.fiber.dim)
            f = sampler.quotient(variety, max_degree=2)
            eta = sampler.vector_field(variety)
            lhs_f = pair(function_act(M.chart.local(f), m), word, phi, ctx)
            rhs_f = pair(m, word.prepend(f), phi, ctx)
            report.record(
                f"adjoint function [{name}] #{trial:04d}",
                "<f.m, r> = <m, f.r>",
                lhs_f == rhs_f,
            )
            lhs_e = pair(gauge_act(eta, m, M), word, phi, ctx)
            rhs_e = -pair(m, word.prepend(eta), phi, ctx)
            report.record(
                f"adjoint field [{name}] #{trial:04d}",
                "<eta.m, r> = -<m, eta.r>",
                lhs_e == rhs_e,
            )
            r = word.apply_rud(ctx.vacuum_functional(phi))
            report.record(
                f"canonical evaluation [{name}] #{trial:04d}",
                "<m, w.(1 x phi)> equals the canonical evaluation of the reduction",
                pair(m, word, phi, ctx) == pair_rud(m, r, ctx),
            )
            w1, w2 = _equal_reduction_pair(sampler, ctx, word)
            try:
                ok = well_definedness_check(m, w1, w2, phi, ctx)
            except ValueError:
                ok = False
            report.record(
                f"well defined [{name}] #{trial:04d}",
                "equal reductions give equal pairings",
                ok,
            )
            # the pairing factors through the fiber
            tbar = ctx.point.shifted_parameter(sampler.rng.randrange(M.chart.s))
            shifted = m + function_act(M.chart.local(tbar), sampler.gauge_element(M, max_degree=1, max_power=0))
            report.record(
                f"fiber factorization [{name}] #{trial:04d}",
                "adding maximal-ideal multiples leaves the bare pairing unchanged",
                pair(m, OperatorWord(), phi, ctx)
                == pair(shifted, OperatorWord(), phi, ctx),
            )
    return report


@_timed
def filtration_suite(seed: int = 0, samples: int = 40, depth: int = 3) -> SuiteReport:
    """Field filtration laws on the variety side plus the module drops."""
    report = SuiteReport("filtration", seed)
    sampler = Sampler(seed)
    targets = [("sphere", "sphere"), ("line", "affine_line")]
    for vname, cname in targets:
        variety = named_variety(cname)
        point = base_point(cname)
        for trial in range(samples // 2):
            eta = sampler.vector_field(variety)
            base_level = filtration_level(eta, point)
            if eta.is_zero():
                continue
            l = sampler.rng.randint(1, 2)
            f = variety.ideal.element(1)
            for _ in range(l):
                f = f * point.shifted_parameter(sampler.rng.randrange(point.chart.s))
            scaled_level = filtration_level(eta * f, point)
            report.record(
                f"ideal scaling [{vname}] #{trial:04d}",
                "multiplying by m_p^l raises the filtration level by at least l",
                scaled_level >= min(base_level + l, 16),
                {"base": base_level, "scaled": scaled_level, "l": l},
            )
            mu = sampler.vector_field(variety)
            lm = filtration_level(mu, point)
            lb = filtration_level(eta.bracket(mu), point)
            report.record(
                f"bracket filtration [{vname}] #{trial:04d}",
                "[D(l), D(k)] lies in D(l+k)",
                lb >= min(base_level + lm, 16),
                {"l": base_level, "k": lm, "bracket": lb},
            )
        # lift stability: successive truncations differ deep in the filtration
        chart, point_ = point.chart, point
        for n in range(0, 3):
            a = truncated_lift(chart, point_, 0, n)
            b = truncated_lift(chart, point_, 0, n + 1)
            diff = a - b
            lvl = filtration_level(diff, point_) if not diff.is_zero() else 16
            report.record(
                f"lift refinement [{vname}] N={n}",
                "lifts at orders N and N+1 differ at filtration level >= N",
                lvl >= n,
                {"level": lvl},
            )
    for name, ctx in standard_rud_contexts():
        rep = filtration_checks(ctx, depth=depth, seed=seed, samples=samples // 4)
        report.record(
            f"module drops [{name}]",
            "induced module levels drop under parameters and deep fields",
            rep["status"] == "pass",
            None if rep["status"] == "pass" else rep,
        )
    return report


SUITES = {
    "lie": lie_suite,
    "gauge": gauge_suite,
    "rudakov": rudakov_suite,
    "reduction": reduction_suite,
    "density": density_suite,
    "pairing": pairing_suite,
    "filtration": filtration_suite,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    import inspect

    accepted = inspect.signature(fn).parameters
    return fn(**{k: v for k, v in kwargs.items() if k in accepted})
