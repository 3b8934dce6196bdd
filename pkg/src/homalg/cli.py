"""``homalg`` command line.

Exit codes: 0 when every requested check passes (or the command completed),
1 when a check fails or a precondition is not met, 2 for usage and input
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .algebra import (
    HomAlgebra,
    PreconditionError,
    check_associative,
    check_commutative,
    check_hom_associative,
    find_units,
    is_two_sided_unit,
)
from .fixtures import DEFAULT_DEGREE_BOUND, FIXTURES, DimTwoKernelFixture
from .generate import RECIPES, GenerationError, random_hom_algebra
from .linalg import Field
from .search import SearchSpec, SpecError, explore_codim2, naive_enumerate, search
from .search.engine import BUDGET_EXCEEDED, NaiveCapExceeded
from .structure import (
    DegenerateQuotient,
    NotWellDefined,
    alpha_image,
    alpha_kernel,
    associative_factor,
    centralizer,
    codim_analysis,
    is_hom_ideal,
    nucleus,
    verify_unital_identities,
)
from .twisting import (
    BudgetExceeded,
    detwist,
    enumerate_twists,
    generalized_twist,
    verify_weak_unit_identities,
    weak_embedding_obstruction,
    yau_twist,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECKS = ("hom-associative", "associative", "commutative", "units", "unital-identities",
          "weak-unit-identities", "obstruction")


class UsageError(Exception):
    pass


# -- helpers --------------------------------------------------------------------


def _fmt_vec(F: Field, v) -> list[str]:
    return [F.format(x) for x in v]


def _fmt_mat(F: Field, m) -> list[list[str]]:
    return [[F.format(x) for x in row] for row in m]


def _witness_dict(F: Field, w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, dict):
        return {k: int(v) if isinstance(v, (int, np.integer)) else str(v) for k, v in w.items()}
    if isinstance(w, tuple):
        return {"detail": [x if isinstance(x, str) else _fmt_vec(F, x) if isinstance(x, np.ndarray) else int(x) for x in w]}
    return {"detail": str(w)}


def _precondition(F: Field, exc: PreconditionError) -> dict:
    return {"error": type(exc).__name__, "message": str(exc), "witness": _witness_dict(F, getattr(exc, "witness", None))}


def _hom(obj, command: str) -> HomAlgebra:
    if not isinstance(obj, HomAlgebra):
        raise UsageError(f"{command} needs a twisting map; the input has no 'alpha'")
    return obj


def _verified_unit(obj):
    """Declared unit when it really is one, otherwise the solved two-sided unit."""
    a = obj.algebra if isinstance(obj, HomAlgebra) else obj
    if a.unit is not None and is_two_sided_unit(a, a.unit):
        return a.unit
    return find_units(a).two_sided_unit


def _matrix_arg(F: Field, text: str, n: int):
    """``--alpha``: a file or inline JSON holding a matrix or an algebra with alpha."""
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise io.FileFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}", "--alpha") from None
    if isinstance(doc, dict):
        obj = io.from_dict(doc)
        if not isinstance(obj, HomAlgebra):
            raise io.FileFormatError("file has no alpha", "alpha", "--alpha")
        if obj.field != F:
            raise io.FileFormatError("field differs from the algebra's", "field", "--alpha")
        return obj.alpha_matrix
    if not isinstance(doc, list) or len(doc) != n or any(not isinstance(r, list) or len(r) != n for r in doc):
        raise io.FileFormatError(f"expected a {n} x {n} matrix", None, "--alpha")
    try:
        return F.array([[io._scalar(F, v, f"[{r}][{c}]") for c, v in enumerate(row)] for r, row in enumerate(doc)])
    except io.FileFormatError as exc:
        raise io.FileFormatError(exc.message, exc.where, "--alpha") from None


def _vector_list(F: Field, text: str, n: int):
    """``--candidates``: file or inline JSON list of coordinate vectors."""
    raw = open(text, encoding="utf-8").read() if os.path.exists(text) else text
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise io.FileFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}", "--candidates") from None
    if not isinstance(doc, list) or any(not isinstance(v, list) or len(v) != n for v in doc):
        raise io.FileFormatError(f"expected a list of length-{n} vectors", None, "--candidates")
    return [F.array([io._scalar(F, x, f"[{r}][{c}]") for c, x in enumerate(v)]) for r, v in enumerate(doc)]


# -- commands -------------------------------------------------------------------


def cmd_check(args) -> tuple[dict, int]:
    obj = io.resolve(args.path, args.degree_bound)
    a = obj.algebra if isinstance(obj, HomAlgebra) else obj
    F = a.field
    explicit = [c for c in CHECKS if getattr(args, c.replace("-", "_"))]
    requested = explicit or list(CHECKS)
    results = []
    has_alpha = isinstance(obj, HomAlgebra)

    def skipped(name, reason):
        results.append({"check": name, "status": "skipped", "reason": reason})

    for name in requested:
        if name == "hom-associative":
            if has_alpha:
                results.append({"check": name, **check_hom_associative(obj).to_dict()})
            else:
                skipped(name, "no twisting map")
        elif name in ("associative", "commutative"):
            rep = (check_associative if name == "associative" else check_commutative)(a).to_dict()
            if not explicit:
                # a property, not a requirement, unless asked for
                rep["holds"] = rep["status"] == "pass"
                rep["status"] = "info"
            results.append({"check": name, **rep})
        elif name == "units":
            results.append({"check": name, "status": "info", "units": find_units(obj).to_dict(F)})
        elif name == "unital-identities":
            if not has_alpha:
                skipped(name, "no twisting map")
                continue
            unit = _verified_unit(obj)
            try:
                reports = verify_unital_identities(obj, unit, diagnostic=unit is None)
            except PreconditionError as exc:
                results.append({"check": name, "status": "fail", **_precondition(F, exc)})
                continue
            for r in reports:
                results.append({"check": name, **r.to_dict()})
        elif name == "weak-unit-identities":
            if not has_alpha:
                skipped(name, "no twisting map")
                continue
            for r in verify_weak_unit_identities(obj, diagnostic=True):
                results.append({"check": name, **r.to_dict()})
        elif name == "obstruction":
            if not has_alpha:
                skipped(name, "no twisting map")
                continue
            w = weak_embedding_obstruction(obj)
            results.append({"check": name, "status": "info", "witness": None if w is None else w.to_dict(F)})

    passed = all(r["status"] != "fail" for r in results)
    report = {
        "command": "check",
        "source": args.path,
        "field": str(F),
        "dim": a.dim,
        "checks": results,
        "passed": passed,
    }
    return report, EXIT_OK if passed else EXIT_FAIL


def cmd_analyze(args) -> tuple[dict, int]:
    obj = io.resolve(args.path, args.degree_bound)
    h = _hom(obj, "analyze")
    F = h.field
    K, Im = alpha_kernel(h), alpha_image(h)
    report = {
        "command": "analyze",
        "source": args.path,
        "field": str(F),
        "dim": h.dim,
        "hom_associative": bool(check_hom_associative(h)),
        "associative": bool(check_associative(h.algebra)),
        "commutative": bool(check_commutative(h.algebra)),
        "subspaces": {
            "alpha_kernel_dim": K.dim,
            "alpha_image_dim": Im.dim,
            "nucleus_dim": nucleus(h).dim,
            "centralizer_dim": centralizer(h).dim,
            "alpha_kernel_is_hom_ideal": bool(is_hom_ideal(h, K)),
            "alpha_image_is_hom_ideal": bool(is_hom_ideal(h, Im)),
        },
        "codim_analysis": None,
        "associative_factor": None,
        "notes": [],
    }
    code = EXIT_OK
    unit = _verified_unit(h)
    if unit is None:
        report["notes"].append("no two-sided unit: codimension analysis not applicable")
    else:
        try:
            cr = codim_analysis(h, unit)
            report["codim_analysis"] = cr.to_dict()
            if not cr.consistent:
                code = EXIT_FAIL
        except PreconditionError as exc:
            report["codim_analysis"] = _precondition(F, exc)
            code = EXIT_FAIL
    try:
        q, _, induced = associative_factor(h)
        report["associative_factor"] = {
            "dim": q.dim,
            "associative": bool(check_associative(q)),
            "products": io.to_dict(q)["products"],
            "induced_alpha": _fmt_mat(F, induced),
        }
    except (NotWellDefined, DegenerateQuotient) as exc:
        report["associative_factor"] = {"error": type(exc).__name__, "message": str(exc)}
    if args.path == "ex-dim-two-kernel":
        report["degree_bounded"] = DimTwoKernelFixture(args.degree_bound).report()
    return report, code


def cmd_twist(args) -> tuple[dict, int]:
    obj = io.resolve(args.path, args.degree_bound)
    a = obj.algebra if isinstance(obj, HomAlgebra) else obj
    F = a.field
    if args.alpha is not None:
        A = _matrix_arg(F, args.alpha, a.dim)
    elif isinstance(obj, HomAlgebra):
        A = obj.alpha_matrix
    else:
        raise UsageError("twist needs --alpha (or an input file with alpha)")
    report = {"command": "twist", "source": args.path, "mode": args.mode, "field": str(F), "dim": a.dim}
    try:
        h = yau_twist(a, A) if args.mode == "yau" else generalized_twist(a, A)
    except PreconditionError as exc:
        report.update(ok=False, **_precondition(F, exc))
        return report, EXIT_FAIL
    if args.output:
        io.save(h, args.output)
    report.update(ok=True, hom_associative=bool(check_hom_associative(h)), result=io.to_dict(h))
    return report, EXIT_OK


def cmd_detwist(args) -> tuple[dict, int]:
    h = _hom(io.resolve(args.path, args.degree_bound), "detwist")
    F = h.field
    report = {"command": "detwist", "source": args.path, "field": str(F), "dim": h.dim}
    try:
        res = detwist(h)
    except PreconditionError as exc:
        report.update(ok=False, **_precondition(F, exc))
        return report, EXIT_FAIL
    report.update(ok=res.round_trip, **res.to_dict())
    return report, EXIT_OK if res.round_trip else EXIT_FAIL


def cmd_enumerate_twists(args) -> tuple[dict, int]:
    obj = io.resolve(args.path, args.degree_bound)
    a = obj.algebra if isinstance(obj, HomAlgebra) else obj
    F = a.field
    report = {"command": "enumerate-twists", "source": args.path, "field": str(F), "dim": a.dim}
    candidates = None
    if args.candidates:
        candidates = _vector_list(F, args.candidates, a.dim)
    elif F.is_rational:
        raise UsageError("over Q, enumerate-twists needs --candidates")
    try:
        res = enumerate_twists(a, _verified_unit(a), budget=args.budget or 2**16, candidates=candidates)
    except (PreconditionError, BudgetExceeded) as exc:
        report.update(ok=False, error=type(exc).__name__, message=str(exc))
        return report, EXIT_FAIL
    report.update(ok=True, **res.to_dict(F))
    return report, EXIT_OK


def _search_spec(args) -> SearchSpec:
    if args.spec_file:
        try:
            with open(args.spec_file, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise io.FileFormatError(exc.strerror or str(exc), None, args.spec_file) from None
        except json.JSONDecodeError as exc:
            raise io.FileFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}", args.spec_file) from None
        if not isinstance(doc, dict):
            raise SpecError("search spec must be a JSON object")
        if args.budget is not None:
            doc["budget"] = args.budget
        return SearchSpec.from_dict(doc)
    if args.field is None or args.dim is None:
        raise UsageError("search needs a spec file or both --field and --dim")
    try:
        F = Field.gf(args.field)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    goal, identity = args.goal, None
    if goal.startswith("find-countermodel"):
        goal, _, identity = goal.partition(":")
        identity = identity or None
    return SearchSpec(
        field=F,
        dim=args.dim,
        constraints=tuple(args.constraint or ()),
        goal=goal,
        identity=identity,
        budget=args.budget if args.budget is not None else 10**7,
    )


def cmd_search(args) -> tuple[dict, int]:
    stream = args.progress and not args.json

    def progress(nodes, count):
        if stream:
            print(f"... {nodes} nodes explored, {count} models", file=sys.stderr, flush=True)
        return True

    if args.explore_codim is not None:
        if args.field is None or args.dim is None:
            raise UsageError("--explore-codim needs --field and --dim")
        F = Field.gf(args.field)
        out = explore_codim2(F, args.dim, args.budget if args.budget is not None else 10**6,
                             codim=args.explore_codim, progress=progress, workers=args.workers)
        spec_doc = {"explore_codim": args.explore_codim, "field": {"GF": F.p}, "dim": args.dim}
    else:
        spec = _search_spec(args)
        out = naive_enumerate(spec) if args.naive else search(spec, progress=progress, workers=args.workers)
        spec_doc = spec.to_dict()
    report = {"command": "search", "spec": spec_doc, "outcome": out.to_dict()}
    return report, EXIT_FAIL if out.status == BUDGET_EXCEEDED else EXIT_OK


def cmd_fixture(args) -> tuple[dict, int]:
    if args.random is not None:
        if args.name:
            raise UsageError("give a fixture name or --random, not both")
        F = Field.rationals() if args.field in (None, "Q") else Field.gf(int(args.field))
        try:
            h = random_hom_algebra(F, args.dim or 3, args.random, args.seed or 0, bijective=args.bijective)
        except GenerationError as exc:
            return {"command": "fixture", "ok": False, "error": "GenerationError", "message": str(exc)}, EXIT_FAIL
        h.algebra.metadata = {**h.algebra.metadata, "recipe": args.random, "seed": args.seed or 0}
        name = f"random:{args.random}"
    elif args.name is None:
        return {"command": "fixture", "fixtures": list(FIXTURES)}, EXIT_OK
    else:
        if args.name not in FIXTURES:
            raise UsageError(f"unknown fixture {args.name!r}; choose from {', '.join(FIXTURES)}")
        name = args.name
        h = io.resolve(args.name, args.degree_bound)
    if args.output:
        io.save(h, args.output)
    return {"command": "fixture", "name": name, "algebra": io.to_dict(h)}, EXIT_OK


# -- text rendering -------------------------------------------------------------


def _render(report: dict) -> str:
    cmd = report.get("command")
    lines = []
    if cmd == "check":
        lines.append(f"{report['source']}: {report['field']}, dim {report['dim']}")
        for r in report["checks"]:
            label = r["check"] + (f" / {r['identity']}" if "identity" in r and r["identity"] != r["check"] else "")
            extra = ""
            if r.get("witness") and r["status"] == "fail":
                extra = f"  witness {r['witness']}"
                if "lhs" in r:
                    extra += f"  lhs {r['lhs']}  rhs {r['rhs']}"
            elif r["status"] == "info":
                extra = "  " + json.dumps({k: v for k, v in r.items() if k not in ("check", "status")})
            elif r.get("reason") or r.get("message"):
                extra = f"  ({r.get('reason') or r.get('message')})"
            lines.append(f"  {r['status'].upper():8} {label}{extra}")
        lines.append("PASS" if report["passed"] else "FAIL")
        return "\n".join(lines)
    if cmd == "fixture" and "fixtures" in report:
        return "\n".join(report["fixtures"])
    if cmd == "fixture" and "algebra" in report:
        return io.format_document(report["algebra"]).rstrip()
    if cmd == "search":
        o = report["outcome"]
        lines.append(f"{o['label']}  nodes={o['nodes_explored']}  backend={o['backend']}  time={o['elapsed_seconds']:.3f}s")
        if o.get("interrupted"):
            lines.append("interrupted: partial result")
        if o.get("model"):
            lines.append(io.format_document(o["model"]).rstrip())
        return "\n".join(lines)
    if "error" in report:
        lines.append(f"{cmd}: {report['error']}: {report['message']}")
        if report.get("witness"):
            lines.append(f"  witness {json.dumps(report['witness'])}")
        return "\n".join(lines)
    if cmd == "twist":
        lines.append(f"{report['mode']} twist of {report['source']}: hom-associative={report['hom_associative']}")
        lines.append(io.format_document(report["result"]).rstrip())
        return "\n".join(lines)
    if cmd == "detwist":
        lines.append(f"detwisted products ({report['field']}, dim {report['dim']}):")
        lines += [f"  e{i + 1} . e{j + 1} : {v} e{k + 1}" for i, j, k, v in report["products"]]
        lines.append(f"left unit {report['left_unit']}")
        lines.append(f"round trip {'OK' if report['round_trip'] else 'FAILED'}")
        return "\n".join(lines)
    if cmd == "enumerate-twists":
        lines.append(f"{report['count']} twisting maps (candidate space dim {report['candidate_dim']})")
        for el, M in zip(report["ac_elements"], report["twist_maps"]):
            lines.append(f"  a = {el}  alpha = {M}")
        return "\n".join(lines)
    return json.dumps(report, indent=2)


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")
    common.add_argument("--seed", type=int, default=None, help="seed for random generation")
    common.add_argument("--budget", type=int, default=None, help="node or enumeration budget")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND,
                        help="truncation degree for the degree-bounded fixture")

    parser = argparse.ArgumentParser(prog="homalg", description="Hom-associative algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify identities, units and obstructions")
    p.add_argument("path", help="algebra file or fixture id")
    for c in CHECKS:
        p.add_argument(f"--{c}", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", parents=[common], help="codimension analysis and derived subspaces")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("twist", parents=[common], help="twist an associative algebra")
    p.add_argument("path")
    p.add_argument("--mode", choices=("yau", "generalized"), default="yau")
    p.add_argument("--alpha", help="matrix file, algebra file with alpha, or inline JSON matrix")
    p.add_argument("--output", "-o", help="write the twisted algebra here")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("detwist", parents=[common], help="recover the associative product")
    p.add_argument("path")
    p.set_defaults(func=cmd_detwist)

    p = sub.add_parser("enumerate-twists", parents=[common], help="all central-multiplication twisting maps")
    p.add_argument("path")
    p.add_argument("--candidates", help="JSON list of candidate elements (required over Q)")
    p.set_defaults(func=cmd_enumerate_twists)

    p = sub.add_parser("search", parents=[common], help="finite model search")
    p.add_argument("spec_file", nargs="?", help="JSON search spec")
    p.add_argument("--field", type=int, help="prime p for GF(p)")
    p.add_argument("--dim", type=int)
    p.add_argument("--constraint", "-c", action="append", help="constraint id (repeatable)")
    p.add_argument("--goal", default="find-model", help="find-model | count-models | find-countermodel:<identity>")
    p.add_argument("--naive", action="store_true", help="use the unpruned enumerator")
    p.add_argument("--explore-codim", type=int, help="explore unital nonassociative models of this codimension")
    p.add_argument("--progress", action="store_true", help="stream node counts to stderr")
    p.add_argument("--workers", type=int, default=1, help="processes for root splitting (same outcome)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("fixture", parents=[common], help="list, print or generate fixtures")
    p.add_argument("name", nargs="?")
    p.add_argument("--random", choices=RECIPES, help="generate a seeded random algebra")
    p.add_argument("--field", default=None, help="Q or a prime (for --random)")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--bijective", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        report, code = args.func(args)
    except (io.FileFormatError, SpecError, NaiveCapExceeded, UsageError, ValueError) as exc:
        msg = str(exc)
        if getattr(args, "json", False):
            print(json.dumps({"command": args.command, "error": type(exc).__name__, "message": msg}))
        else:
            print(f"homalg {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, indent=2) if args.json else _render(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
