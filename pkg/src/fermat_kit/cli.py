"""Command-line front end.

Every subcommand prints one JSON document on standard output.  Exit codes:
0 pass or success, 1 a definite negative result (nonzero residual,
infeasible system, failed fixture), 2 bad usage or bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import builder, fixtures, nonexistence
from .errors import (
    ConsistencyFailure,
    EvenK,
    ExclusionViolated,
    FermatKitError,
    Infeasible,
    LeadingCoefficientZero,
    NonPolynomialQuotient,
    SpecError,
)
from .sampling import Numeric, NumericExpPoly
from .exppoly import Poly
from .scalar import Scalar
from .serialize import (
    exppoly_from_json,
    exppoly_to_json,
    operator_to_json,
    poly_from_json,
    poly_to_json,
    scalar_from_json,
    scalar_to_json,
)
from .spec import SpecFile, parse_spec
from .verifier import FermatEquation, verify_fermat, verify_nonlinear

EPS_ENV = "FERMAT_KIT_EPS"

# Negative mathematical outcomes: reported with exit 1, not as input errors.
_NEGATIVE = (Infeasible, EvenK, ConsistencyFailure, NonPolynomialQuotient, ExclusionViolated,
             LeadingCoefficientZero)


class UsageError(Exception):
    pass


def _eps_override():
    raw = os.environ.get(EPS_ENV)
    if raw is None:
        return None
    try:
        eps = float(raw)
    except ValueError:
        raise UsageError(f"{EPS_ENV} must be a positive number, got {raw!r}") from None
    if not eps > 0:
        raise UsageError(f"{EPS_ENV} must be a positive number, got {raw!r}")
    return eps


def _to_jsonable(x):
    if isinstance(x, Scalar):
        return scalar_to_json(x)
    if isinstance(x, Poly):
        return poly_to_json(x)
    if isinstance(x, dict):
        return {str(k): _to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_jsonable(v) for v in x]
    return x


def family_to_json(fam: builder.SolutionFamily) -> dict:
    form = fam.f
    out = {
        "form": {"a": scalar_to_json(form.a), "b": scalar_to_json(form.b),
                 "Q1": poly_to_json(form.Q1), "Q2": poly_to_json(form.Q2),
                 "eb": None if form.eb is None else scalar_to_json(form.eb)},
        "solution": exppoly_to_json(fam.solution),
        "operator": operator_to_json(fam.op),
        "rhs": exppoly_to_json(fam.rhs),
        "side_conditions": [{"name": name, "residual": scalar_to_json(r),
                             "zero": r.is_zero(builder.FLOAT_SIDE_TOL)}
                            for name, r in fam.side_conditions],
        "exclusions": [{"name": name, "ok": ok} for name, ok in fam.exclusions_checked],
        "params": _to_jsonable(fam.params),
    }
    if fam.report is not None:
        out["report"] = fam.report.to_json()
    return out


# -- command bodies: each returns (exit_code, json_document) ---------------------------


def _verify(spec: SpecFile, eps):
    task = spec.payload
    ctx = spec.context(eps)
    if isinstance(task.equation, FermatEquation):
        report = verify_fermat(task.f, task.equation, ctx, precision=task.precision)
    else:
        report = verify_nonlinear(task.f, task.equation, ctx, precision=task.precision)
    return (0 if report.passed else 1), report.to_json()


def _pinned(block, backend, env):
    raw = block.get("pinned") or {}
    return {int(k): scalar_from_json(v, backend, env) for k, v in raw.items()}


def _build(spec: SpecFile, eps):
    block = dict(spec.payload)
    ctx = spec.context(eps)
    env, be = spec.atoms, spec.backend
    op = block["operation"]

    def sc(key, default=None):
        if key not in block:
            if default is None:
                raise UsageError(f"build {op}: missing parameter {key!r}")
            return Scalar.coerce(default, be)
        return scalar_from_json(block[key], be, env)

    def pl(key):
        if key not in block:
            raise UsageError(f"build {op}: missing parameter {key!r}")
        return poly_from_json(block[key], be, env)

    def num(key, default=None):
        v = block.get(key, default)
        if not isinstance(v, int) or isinstance(v, bool):
            raise UsageError(f"build {op}: {key!r} must be an integer")
        return v

    if op == "shift_coeffs":
        coeffs = builder.solve_shift_coeffs(num("tau"), sc("w"), _pinned(block, be, env), ctx)
        return 0, {"operation": op, "coeffs": [scalar_to_json(a) for a in coeffs]}
    if op == "ac_to_c":
        c = builder.ac_to_c(sc("w"), sc("a"), num("branch_k", 0), ctx.env)
        return 0, {"operation": op, "c": scalar_to_json(c)}
    if op == "case_i":
        fam = builder.build_case_i(num("k"), sc("c"), num("branch_m", 0), pl("Q1"), pl("Q2"),
                                   sc("b", 0), ctx)
    elif op == "case_ii":
        fam = builder.build_case_ii(num("k"), sc("a"), sc("c"), pl("Q1"), pl("Q2"), sc("b", 0),
                                    ctx, eb=sc("eb") if "eb" in block else None)
    elif op == "mixed":
        fam = builder.build_mixed(num("m"), num("n"), sc("A"), sc("B"), sc("a"), sc("b", 0),
                                  num("branch", 1), ctx, num("branch_k", 0))
    else:  # sin_family
        fam = builder.build_sin_family(sc("c"), num("tau"), _pinned(block, be, env), ctx)
    doc = {"operation": op, **family_to_json(fam)}
    return (0 if fam.report is None or fam.report.passed else 1), doc


def _gate(block):
    verdict = nonexistence.gate(block["m"], block["n"], block["tau"], block["class"],
                                block.get("pure_shift", False))
    return 0, verdict.to_json()


def _search(spec: SpecFile, eps):
    task = spec.payload
    result = nonexistence.ansatz_search(task.equation, task.space, ctx=spec.context(eps),
                                        **task.options)
    if isinstance(result, nonexistence.ExhaustionCertificate):
        return 0, result.to_json()
    return 0, {"result": "Solutions", "space": task.space.to_json(),
               "solutions": [s.to_json() for s in result]}


def _eval(spec: SpecFile, eps):
    block = spec.payload
    ctx = spec.context(eps)
    f = exppoly_from_json(block["f"], spec.backend, spec.atoms)
    zs = [scalar_from_json(p, spec.backend, spec.atoms) for p in block["points"]]
    k = block.get("derivative", 0)
    num = Numeric(env=ctx.env)
    with num.context():
        vals = NumericExpPoly(f, num).values(num.points([z.to_complex(ctx.env) for z in zs]), k)
        values = [[float(v.real), float(v.imag)] for v in vals]
    return 0, {"derivative": k, "points": [scalar_to_json(z.to_float(ctx.env)) for z in zs],
               "values": values}


def _fixtures(names):
    corpus = [fixtures.get(n) for n in names] if names else list(fixtures.CORPUS)
    results = [fixtures.run_fixture(fx) for fx in corpus]
    ok = all(r.passed for r in results)
    width = max(len(r.name) for r in results)
    lines = [f"{'fixture':<{width}}  backend  symbolic  sample_max_abs  status"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {r.backend:<7}  {str(r.symbolic_pass):<8}  "
                     f"{r.sample_max_abs:<14.3e}  {'PASS' if r.passed else 'FAIL'}")
    print("\n".join(lines), file=sys.stderr)
    return (0 if ok else 1), {"all_passed": ok, "table": lines,
                              "fixtures": [r.to_json() for r in results]}


# -- argument handling ------------------------------------------------------------------


def _read_spec(args, command):
    if args.spec is not None:
        try:
            with open(args.spec, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
    elif args.json is not None:
        data = args.json.encode("utf-8")
    else:
        raise UsageError(f"{command} needs --spec FILE or --json TEXT")
    spec = parse_spec(data)
    if spec.command != command:
        raise UsageError(f"spec holds a {spec.command!r} block, not {command!r}")
    return spec


def _wrap_block(command, block_text):
    """Accept a bare parameter block for --json and wrap it into a spec."""
    try:
        obj = json.loads(block_text)
    except json.JSONDecodeError:
        return block_text
    if isinstance(obj, dict) and "version" not in obj:
        return json.dumps({"version": "1", command: obj})
    return block_text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fermat-kit", description="Verify, build and search exponential-"
                "polynomial solutions of Fermat-type shift equations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (("verify", "verify a candidate solution"),
                            ("build", "construct a solution family"),
                            ("search", "bounded ansatz search"),
                            ("eval", "evaluate an exponential polynomial")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--spec", help="spec file (JSON)")
        s.add_argument("--json", help="inline spec document or bare parameter block")
    g = sub.add_parser("gate", help="non-existence gate")
    g.add_argument("--spec")
    g.add_argument("--json")
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--tau", type=int)
    g.add_argument("--class", dest="cls", choices=["entire", "meromorphic"])
    g.add_argument("--pure-shift", action="store_true")
    fx = sub.add_parser("fixtures", help="run the worked-example corpus")
    fx.add_argument("names", nargs="*", help="restrict to these fixtures")
    return p


def _dispatch(args):
    eps = _eps_override()
    cmd = args.command
    if cmd == "fixtures":
        return _fixtures(args.names)
    if getattr(args, "json", None) is not None:
        args.json = _wrap_block(cmd, args.json)
    if cmd == "gate" and args.spec is None and args.json is None:
        missing = [k for k in ("m", "n", "tau", "cls") if getattr(args, k) is None]
        if missing:
            raise UsageError("gate needs --m, --n, --tau and --class (or --spec)")
        return _gate({"m": args.m, "n": args.n, "tau": args.tau, "class": args.cls,
                      "pure_shift": args.pure_shift})
    spec = _read_spec(args, cmd)
    if cmd == "verify":
        return _verify(spec, eps)
    if cmd == "build":
        return _build(spec, eps)
    if cmd == "gate":
        return _gate(spec.payload)
    if cmd == "search":
        return _search(spec, eps)
    return _eval(spec, eps)


def run(argv=None) -> int:
    """Run the CLI; prints one JSON document and returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        code, doc = _dispatch(args)
    except UsageError as exc:
        code, doc = 2, {"error": "UsageError", "message": str(exc)}
    except SpecError as exc:
        code, doc = 2, exc.to_json()
    except _NEGATIVE as exc:
        code, doc = 1, {"result": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, Infeasible):
            doc["rule"] = exc.rule
            if exc.certificate is not None:
                doc["certificate"] = _to_jsonable(exc.certificate)
        if isinstance(exc, ConsistencyFailure) and exc.report is not None:
            doc["report"] = exc.report.to_json()
    except (FermatKitError, ValueError, TypeError, KeyError, ArithmeticError) as exc:
        code, doc = 2, {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(doc, indent=2))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
