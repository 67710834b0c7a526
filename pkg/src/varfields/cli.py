"""Batch command-line front end.

Problem definitions are JSON files validated against PROBLEM_SCHEMA;
results are reports printed as JSON (default) or text.  Exit codes:
0 when everything passed, 1 when a check failed, 2 on input errors.

Commands:
  variety   build the variety, print the Jacobian, minors and charts,
            and check local parameters at every declared point
  verify    run property suites (lie, gauge, rudakov, reduction,
            density, pairing, filtration, or all)
  act       one-shot action of an operator on a module element
  pair      evaluate the adjoint pairing of an element against a word
  sweep     run the density sweep on a module element
  probe     reduce an induced-module element into 1 (x) U
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import jsonschema

from varfields import kernels
from varfields.catalog import named_variety
from varfields.circle import CircleFamily, circle_dual_check
from varfields.errors import AxiomViolationError, WorkbenchError
from varfields.gauge import (
    GaugeField,
    GaugeModule,
    density_sweep,
    function_act,
    gauge_act,
    sphere_family,
    tensor_module,
)
from varfields.pairing import OperatorWord, PairingContext, pair
from varfields.poly import MonomialOrder, PolyRing
from varfields.repn import gl_family, module_from_json
from varfields.rudakov import RudContext, reduction_extract, rud_act_field, rud_act_function
from varfields.suites import ENGINE_VERSION, SUITES, run_suite
from varfields.variety import Chart, LocalElement, Point, Variety, local_parameter_check
from varfields.vfields import parse_vector_field

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "catalog": {"type": "string"},
        "variables": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "generators": {"type": "array", "items": {"type": "string"}},
        "order": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["grevlex", "lex"]},
                "priority": {"type": "array", "items": {"type": "string"}},
            },
            "additionalProperties": False,
        },
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "coords": {"type": "array", "items": {"type": "string"}},
                    "chart": {"type": "integer"},
                },
                "required": ["coords"],
                "additionalProperties": False,
            },
        },
        "modules": {"type": "array", "items": {"type": "object"}},
        "suites": {"type": "array", "items": {"type": "string"}},
        "seed": {"type": "integer"},
        "samples": {"type": "integer", "minimum": 1},
        "max_degree": {"type": "integer", "minimum": 0},
        "budget": {"type": "integer", "minimum": 1},
        "depth": {"type": "integer", "minimum": 1},
        "alphas": {"type": "array", "items": {"type": "string"}},
        "window": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

_MODULE_SCHEMA = {
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "kind": {"enum": ["tensor", "gauge", "sphere_family", "circle", "rudakov"]},
        "chart": {"type": "integer"},
        "point": {"type": "integer"},
        "alpha": {"type": "string"},
        "window": {"type": "integer"},
        "U": {"type": "object"},
        "B": {"type": "array"},
    },
    "required": ["id", "kind"],
    "additionalProperties": False,
}

_LOCAL_RE = re.compile(r"^(?P<num>.*?)\s*(?:/\s*h(?:\^(?P<power>\d+))?)?\s*$", re.S)


def parse_local(chart: Chart, text: str) -> LocalElement:
    """Parse ``poly`` or ``poly / h^k`` where h is the chart minor."""
    m = _LOCAL_RE.match(text.strip())
    num = m.group("num").strip()
    if num.startswith("(") and num.endswith(")"):
        num = num[1:-1]
    power = int(m.group("power")) if m.group("power") else (1 if "/" in text else 0)
    return chart.local(chart.variety.ring.from_string(num), power)


class ProblemFile:
    """A parsed and validated problem definition."""

    def __init__(self, data: dict):
        jsonschema.validate(data, PROBLEM_SCHEMA)
        for spec in data.get("modules", []):
            jsonschema.validate(spec, _MODULE_SCHEMA)
        self.data = data
        self.variety = self._build_variety()
        self.points = [self._build_point(p) for p in data.get("points", [])]
        self.module_specs = {spec["id"]: spec for spec in data.get("modules", [])}

    @classmethod
    def load(cls, path: str) -> "ProblemFile":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def _build_variety(self) -> Variety:
        data = self.data
        if "catalog" in data:
            return named_variety(data["catalog"])
        if "variables" not in data:
            raise WorkbenchError("problem file needs 'variables' or 'catalog'")
        variables = data["variables"]
        order_spec = data.get("order")
        if order_spec:
            priority_names = order_spec.get("priority", variables)
            priority = [variables.index(v) for v in priority_names]
            order = MonomialOrder(order_spec.get("kind", "grevlex"), priority)
        else:
            order = "grevlex"
        ring = PolyRing(variables, order)
        gens = [ring.from_string(g) for g in data.get("generators", [])]
        return Variety(ring, gens)

    def _build_point(self, spec: dict) -> Point:
        coords = [Fraction(c) for c in spec["coords"]]
        if "chart" in spec:
            chart = self.variety.chart(spec["chart"])
        else:
            chart = next(
                c
                for c in self.variety.standard_atlas()
                if c.h.evaluate(coords)
            )
        return Point(chart, coords)

    def _finite_module(self, spec: dict, s: int):
        if "raw" in spec:
            return module_from_json(spec["raw"])
        family = spec["family"]
        if family == "one_dim":
            return gl_family("one_dim", s, alpha=Fraction(spec["alpha"]))
        if family in ("natural", "dual_natural"):
            return gl_family(family, s)
        if family in ("sym", "ext"):
            return gl_family(family, s, power=int(spec["power"]))
        raise WorkbenchError(f"unknown module family {family!r}")

    def build_module(self, module_id: str):
        """Instantiate a declared module; axiom failures propagate."""
        spec = self.module_specs.get(module_id)
        if spec is None:
            raise WorkbenchError(f"no module with id {module_id!r} in the file")
        kind = spec["kind"]
        if kind == "circle":
            return CircleFamily(Fraction(spec.get("alpha", 0)), spec.get("window", 16))
        if kind == "sphere_family":
            return sphere_family(Fraction(spec.get("alpha", 0)))
        chart = self.variety.chart(spec.get("chart", 0))
        U = self._finite_module(spec["U"], chart.s)
        if kind == "tensor":
            return tensor_module(chart, U, name=module_id)
        if kind == "gauge":
            mats = [
                [[parse_local(chart, entry) for entry in row] for row in direction]
                for direction in spec["B"]
            ]
            field = GaugeField(chart, U, mats)
            return GaugeModule(chart, U, field, name=module_id)
        if kind == "rudakov":
            point = self.points[spec.get("point", 0)]
            if point.chart is not chart:
                point = Point(chart, point.coords)
            return RudContext(chart, point, U)
        raise WorkbenchError(f"unknown module kind {kind!r}")


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    print(f"== {report.get('command', 'report')} ==")

    def walk(value, indent=0):
        pad = "  " * indent
        if isinstance(value, dict):
            for key in sorted(value):
                sub = value[key]
                if isinstance(sub, (dict, list)):
                    print(f"{pad}{key}:")
                    walk(sub, indent + 1)
                else:
                    print(f"{pad}{key}: {sub}")
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, (dict, list)):
                    walk(item, indent)
                    print()
                else:
                    print(f"{pad}- {item}")

    walk({k: v for k, v in report.items() if k != "command"})


def _engine_header(command: str, seed=None) -> dict:
    out = {
        "command": command,
        "engine": {"version": ENGINE_VERSION, "kernel_backend": kernels.BACKEND},
    }
    if seed is not None:
        out["seed"] = seed
    return out


def cmd_variety(args) -> int:
    problem = ProblemFile.load(args.file)
    v = problem.variety
    report = _engine_header("variety")
    report["variety"] = {
        "variables": list(v.ring.variables),
        "generators": [str(g) for g in v.generators],
        "jacobian": [[str(e) for e in row] for row in v.jacobian],
        "rank": v.rank,
        "dimension": v.dim,
    }
    report["charts"] = [c.to_json() for c in v.standard_atlas()]
    checks = []
    ok_all = True
    for idx, point in enumerate(problem.points):
        ok = local_parameter_check(point.chart, point)
        ok_all &= ok
        checks.append(
            {
                "point": point.to_json(),
                "chart": point.chart.to_json()["minor"],
                "local_parameters": "pass" if ok else "fail",
            }
        )
    report["points"] = checks
    report["status"] = "pass" if ok_all else "fail"
    _emit(report, args.json)
    return 0 if ok_all else 1


def _suite_kwargs(problem: ProblemFile, args) -> dict:
    data = problem.data
    out = {
        "seed": args.seed if args.seed is not None else data.get("seed", 0),
        "samples": data.get("samples", 100),
        "max_degree": args.max_degree
        if args.max_degree is not None
        else data.get("max_degree", 4),
        "depth": data.get("depth", 3),
        "budget": args.budget if args.budget is not None else data.get("budget", 10000),
    }
    if "alphas" in data:
        out["alphas"] = [Fraction(a) for a in data["alphas"]]
    return out


def cmd_verify(args) -> int:
    problem = ProblemFile.load(args.file)
    wanted = [args.suite] if args.suite and args.suite != "all" else None
    if wanted is None:
        wanted = problem.data.get("suites") or sorted(SUITES)
        if "all" in wanted:
            wanted = sorted(SUITES)
    kwargs = _suite_kwargs(problem, args)
    report = _engine_header("verify", seed=kwargs["seed"])
    suite_reports = []
    overall_ok = True
    # declared modules are validated up front; axiom failures become records
    module_records = []
    for module_id in sorted(problem.module_specs):
        try:
            built = problem.build_module(module_id)
            record = {"module": module_id, "status": "pass"}
            if isinstance(built, CircleFamily):
                ok = circle_dual_check(built.alpha, built.window)
                record["status"] = "pass" if ok else "fail"
                record["law"] = "dual of the family has negated weight"
        except AxiomViolationError as err:
            record = {"module": module_id, "status": "fail", "witness": err.witness}
        module_records.append(record)
        overall_ok &= record["status"] == "pass"
    report["modules"] = module_records
    for name in wanted:
        rep = run_suite(name, **kwargs)
        overall_ok &= rep.status == "pass"
        suite_reports.append(rep.to_json())
    report["suites"] = suite_reports
    report["status"] = "pass" if overall_ok else "fail"
    _emit(report, args.json)
    return 0 if overall_ok else 1


def _parse_gauge_element(M: GaugeModule, text: str):
    coeffs = json.loads(text)
    if not isinstance(coeffs, list):
        raise WorkbenchError("gauge element must be a JSON list of coefficient strings")
    return M.element([parse_local(M.chart, c) for c in coeffs])


def _parse_rud_element(ctx: RudContext, text: str):
    data = json.loads(text)
    terms = {}
    for rec in data:
        key = (tuple(int(e) for e in rec["y"]), int(rec["u"]))
        terms[key] = terms.get(key, Fraction(0)) + Fraction(rec["c"])
    return ctx.element(terms)


def _parse_operator(problem: ProblemFile, text: str):
    kind, _, body = text.partition(":")
    kind = kind.strip()
    body = body.strip()
    if kind == "field":
        return parse_vector_field(problem.variety, body)
    if kind == "fun":
        return problem.variety.ideal.element(problem.variety.ring.from_string(body))
    raise WorkbenchError("operator must look like 'field: ...' or 'fun: ...'")


def cmd_act(args) -> int:
    problem = ProblemFile.load(args.file)
    built = problem.build_module(args.module)
    report = _engine_header("act")
    report["module"] = args.module
    if isinstance(built, CircleFamily):
        elem_data = json.loads(args.element)
        elem = built.basis(0) * 0
        for s, c in elem_data.items():
            elem = elem + built.basis(int(s)) * Fraction(c)
        m = re.fullmatch(r"\s*(e|t)\^?(-?\d+)\s*", args.operator)
        if not m:
            raise WorkbenchError("circle operators look like 'e^k' or 't^k'")
        k = int(m.group(2))
        result = built.act_e(k, elem) if m.group(1) == "e" else built.act_t(k, elem)
        report["result"] = repr(result)
    elif isinstance(built, RudContext):
        elem = _parse_rud_element(built, args.element)
        op = _parse_operator(problem, args.operator)
        from varfields.vfields import VectorField

        if isinstance(op, VectorField):
            result = rud_act_field(op, elem, built)
        else:
            result = rud_act_function(op, elem, built)
        report["result"] = str(result)
        report["result_terms"] = result.to_json()
    else:
        elem = _parse_gauge_element(built, args.element)
        op = _parse_operator(problem, args.operator)
        from varfields.vfields import VectorField

        if isinstance(op, VectorField):
            result = gauge_act(op, elem, built)
        else:
            result = function_act(built.chart.local(op), elem)
        report["result"] = str(result)
        report["result_coeffs"] = result.to_json()
    report["status"] = "pass"
    _emit(report, args.json)
    return 0


def cmd_pair(args) -> int:
    problem = ProblemFile.load(args.file)
    M = problem.build_module(args.module)
    if not isinstance(M, GaugeModule):
        raise WorkbenchError("pairing needs a gauge or tensor module")
    point = problem.points[args.point]
    if point.chart is not M.chart:
        point = Point(M.chart, point.coords)
    ctx = PairingContext(M, point)
    m = _parse_gauge_element(M, args.element)
    letters = []
    for rec in json.loads(args.word):
        if "field" in rec:
            letters.append(parse_vector_field(problem.variety, rec["field"]))
        elif "fun" in rec:
            letters.append(problem.variety.ideal.element(problem.variety.ring.from_string(rec["fun"])))
        else:
            raise WorkbenchError("word letters need a 'field' or 'fun' key")
    phi = [Fraction(x) for x in json.loads(args.phi)]
    value = pair(m, OperatorWord(letters), phi, ctx)
    report = _engine_header("pair")
    report.update(
        {
            "module": args.module,
            "value": str(value),
            "fiber_dimension": ctx.fiber.dim,
            "status": "pass",
        }
    )
    _emit(report, args.json)
    return 0


def cmd_sweep(args) -> int:
    problem = ProblemFile.load(args.file)
    M = problem.build_module(args.module)
    if not isinstance(M, GaugeModule):
        raise WorkbenchError("sweep needs a gauge or tensor module")
    point = problem.points[args.point]
    if point.chart is not M.chart:
        point = Point(M.chart, point.coords)
    v = _parse_gauge_element(M, args.element)
    budget = args.budget if args.budget is not None else problem.data.get("budget", 10000)
    result = density_sweep(M, v, point, budget=budget)
    report = _engine_header("sweep")
    report.update({"module": args.module, "result": result.to_json()})
    report["status"] = "pass" if result.reached else "inconclusive"
    _emit(report, args.json)
    return 0 if result.reached else 1


def cmd_probe(args) -> int:
    problem = ProblemFile.load(args.file)
    ctx = problem.build_module(args.module)
    if not isinstance(ctx, RudContext):
        raise WorkbenchError("probe needs a rudakov module")
    v = _parse_rud_element(ctx, args.element)
    u = reduction_extract(v, ctx)
    report = _engine_header("probe")
    report.update(
        {
            "module": args.module,
            "input": v.to_json(),
            "extracted": u.to_json(),
            "nonzero": not u.is_zero(),
            "status": "pass" if not u.is_zero() else "fail",
        }
    )
    _emit(report, args.json)
    return 0 if not u.is_zero() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varfields",
        description="exact workbench for vector fields on affine varieties "
        "and their gauge and induced modules",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {ENGINE_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--file", required=True, help="problem definition JSON file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-degree", type=int, default=None, dest="max_degree")
        p.add_argument("--budget", type=int, default=None)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", default=True)
        fmt.add_argument("--text", dest="json", action="store_false")

    p = sub.add_parser("variety", help="atlas and local-parameter report")
    common(p)
    p.set_defaults(fn=cmd_variety)

    p = sub.add_parser("verify", help="run property suites")
    common(p)
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("act", help="apply one operator to one element")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--element", required=True)
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("pair", help="evaluate the adjoint pairing")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--point", type=int, default=0)
    p.add_argument("--element", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--phi", required=True)
    p.set_defaults(fn=cmd_pair)

    p = sub.add_parser("sweep", help="density sweep with certificates")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--point", type=int, default=0)
    p.add_argument("--element", required=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("probe", help="reduce an induced element into 1 (x) U")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--element", required=True)
    p.set_defaults(fn=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (WorkbenchError, jsonschema.ValidationError, FileNotFoundError,
            json.JSONDecodeError, KeyError, IndexError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
