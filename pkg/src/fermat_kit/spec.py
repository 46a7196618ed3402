"""JSON equation-spec files: parsing, validation and printing.

A spec file is one JSON object::

    {
      "version": "1",
      "backend": "exact",                      # or "float"
      "exponentials": [["3*pi*i", "-1"]],      # declared e^x = v pairs
      "atoms": {"c": "2*pi*i"},                # numeric values for symbols
      "verify": {...}                          # exactly one command block
    }

Command blocks: ``verify``, ``build``, ``gate``, ``search``, ``eval``.
Scalars are numbers, expression strings ("-1/(6*i)") or
{"re", "im", "backend"} objects; polynomials are lists of scalars in
ascending degree; exponential polynomials are lists of {"poly", "freq"}.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import jsonschema

from .errors import DuplicateExponential, SchemaError, SpecDuplicateExponential, SpecSyntaxError
from .nonexistence import AnsatzSpace
from .scalar import DEFAULT_CONTEXT, EXACT, FLOAT, Context, Scalar
from .serialize import (
    exppoly_from_json,
    exppoly_to_json,
    operator_from_json,
    operator_to_json,
    scalar_from_json,
    scalar_to_json,
)
from .verifier import FermatEquation, NonlinearShiftEquation

COMMANDS = ("verify", "build", "gate", "search", "eval")
VERSION = "1"

_SCALAR = {"oneOf": [
    {"type": "number"},
    {"type": "string"},
    {"type": "object", "properties": {"re": {}, "im": {}, "backend": {"enum": [EXACT, FLOAT]},
                                      "terms": {"type": "array"}},
     "additionalProperties": False},
]}
_POLY = {"oneOf": [_SCALAR, {"type": "array", "items": _SCALAR}]}
_EXPPOLY = {"oneOf": [
    _POLY,
    {"type": "array", "items": {"type": "object", "required": ["poly"],
                                "properties": {"poly": _POLY, "freq": _SCALAR},
                                "additionalProperties": False}},
]}
_OPERATOR = {
    "type": "object",
    "required": ["type", "c"],
    "properties": {"type": {"enum": ["LinearShift", "Difference", "DiffDelta", "MixedDelay"]}},
}
_NONLINEAR = {
    "type": "object",
    "required": ["type", "m", "n", "q", "p", "L"],
    "properties": {"type": {"const": "nonlinear"}, "m": {"type": "integer", "minimum": 1},
                   "n": {"type": "integer", "minimum": 1}, "q": _EXPPOLY, "p": _EXPPOLY,
                   "L": _OPERATOR, "denominator": _EXPPOLY},
}
_FERMAT = {
    "type": "object",
    "required": ["type", "op", "rhs"],
    "properties": {"type": {"const": "fermat"}, "op": _OPERATOR, "rhs": _EXPPOLY},
}

SCHEMA = {
    "type": "object",
    "required": ["version"],
    "properties": {
        "version": {"type": "string"},
        "backend": {"enum": [EXACT, FLOAT]},
        "exponentials": {"type": "array",
                         "items": {"type": "array", "items": _SCALAR, "minItems": 2,
                                   "maxItems": 2}},
        "atoms": {"type": "object", "additionalProperties": _SCALAR},
        "eps_zero": {"type": "number", "exclusiveMinimum": 0},
        "verify": {"type": "object", "required": ["f", "equation"],
                   "properties": {"f": _EXPPOLY,
                                  "equation": {"oneOf": [_FERMAT, _NONLINEAR]},
                                  "precision": {"enum": ["extended", "double"]}}},
        "build": {"type": "object", "required": ["operation"],
                  "properties": {"operation": {"enum": ["case_i", "case_ii", "mixed",
                                                        "shift_coeffs", "sin_family",
                                                        "ac_to_c"]}}},
        "gate": {"type": "object", "required": ["m", "n", "tau", "class"],
                 "properties": {"m": {"type": "integer", "minimum": 1},
                                "n": {"type": "integer", "minimum": 1},
                                "tau": {"type": "integer", "minimum": 1},
                                "class": {"enum": ["entire", "meromorphic"]},
                                "pure_shift": {"type": "boolean"}},
                 "additionalProperties": False},
        "search": {"type": "object", "required": ["equation", "space"],
                   "properties": {
                       "equation": _NONLINEAR,
                       "space": {"type": "object",
                                 "properties": {"lattice": {"type": "array", "items": _SCALAR},
                                                "default_c": _SCALAR,
                                                "radius": {"type": "integer", "minimum": 0},
                                                "max_poly_degree": {"type": "integer",
                                                                    "minimum": 0},
                                                "max_terms": {"type": "integer", "minimum": 0}},
                                 "oneOf": [{"required": ["lattice"]},
                                           {"required": ["default_c"]}]},
                       "tol": {"type": "number", "exclusiveMinimum": 0},
                       "starts": {"type": "integer", "minimum": 1},
                       "seed": {"type": "integer"},
                       "budget": {"type": "integer", "minimum": 1}}},
        "eval": {"type": "object", "required": ["f", "points"],
                 "properties": {"f": _EXPPOLY, "points": {"type": "array", "items": _SCALAR},
                                "derivative": {"type": "integer", "minimum": 0}}},
    },
    "additionalProperties": False,
    "oneOf": [{"required": [cmd]} for cmd in COMMANDS],
}


@dataclass(frozen=True)
class VerifyTask:
    f: object
    equation: object
    precision: str = "extended"


@dataclass(frozen=True)
class SearchTask:
    equation: NonlinearShiftEquation
    space: AnsatzSpace
    options: dict = field(default_factory=dict)


@dataclass
class SpecFile:
    version: str
    backend: str
    declared_exponentials: list
    atoms: dict
    command: str
    payload: object
    eps_zero: float | None = None

    def context(self, eps_override: float | None = None) -> Context:
        ctx = DEFAULT_CONTEXT
        eps = eps_override if eps_override is not None else self.eps_zero
        if eps is not None:
            ctx = ctx.with_eps(eps_zero=eps)
        if self.atoms:
            ctx = ctx.with_atoms(**self.atoms)
        for arg, value in self.declared_exponentials:
            ctx = ctx.declare(arg, value)
        return ctx


# -- locating errors ----------------------------------------------------------------


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _locate(text: str, path) -> tuple:
    """Approximate position of a JSON path: successive key searches."""
    pos = 0
    for part in path:
        if isinstance(part, str):
            m = re.compile(r'"%s"\s*:' % re.escape(part)).search(text, pos)
            if m is None:
                break
            pos = m.start()
    return _line_col(text, pos)


def _no_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


# -- payload decoding ----------------------------------------------------------------


class _Decoder:
    def __init__(self, text, backend, env):
        self.text = text
        self.backend = backend
        self.env = env

    def fail(self, path, exc):
        line, col = _locate(self.text, path)
        raise SchemaError(f"{'/'.join(map(str, path))}: {exc}", line, col, list(path)) from None

    def scalar(self, obj, path):
        try:
            return scalar_from_json(obj, self.backend, self.env)
        except (ValueError, TypeError, ArithmeticError) as exc:
            self.fail(path, exc)

    def exppoly(self, obj, path):
        try:
            return exppoly_from_json(obj, self.backend, self.env)
        except (ValueError, TypeError, ArithmeticError) as exc:
            self.fail(path, exc)

    def operator(self, obj, path):
        try:
            return operator_from_json(obj, self.backend, self.env)
        except (ValueError, TypeError, KeyError, ArithmeticError) as exc:
            self.fail(path, exc)

    def equation(self, obj, path):
        try:
            if obj["type"] == "fermat":
                return FermatEquation(self.operator(obj["op"], path + ["op"]),
                                      self.exppoly(obj["rhs"], path + ["rhs"]))
            d = obj.get("denominator")
            return NonlinearShiftEquation(
                obj["m"], obj["n"], self.exppoly(obj["q"], path + ["q"]),
                self.exppoly(obj["p"], path + ["p"]), self.operator(obj["L"], path + ["L"]),
                None if d is None else self.exppoly(d, path + ["denominator"]),
            )
        except (ValueError, TypeError) as exc:
            self.fail(path, exc)


def parse_spec(text) -> SpecFile:
    """Parse and validate a spec document (bytes or str)."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecSyntaxError(f"spec is not UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise SpecSyntaxError(str(exc), 1, 1) from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), e.message))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        if isinstance(doc, dict) and not any(cmd in doc for cmd in COMMANDS):
            msg = f"no command block; expected one of {', '.join(COMMANDS)}"
        elif isinstance(doc, dict) and sum(cmd in doc for cmd in COMMANDS) > 1:
            msg = "more than one command block"
        else:
            msg = err.message
        line, col = _locate(text, path)
        raise SchemaError(msg, line, col, path)
    if doc["version"] != VERSION:
        line, col = _locate(text, ["version"])
        raise SchemaError(f"unsupported version {doc['version']!r}", line, col, ["version"])

    backend = doc.get("backend", EXACT)
    dec = _Decoder(text, EXACT, {})
    atoms = {name: dec.scalar(v, ["atoms", name]) for name, v in doc.get("atoms", {}).items()}
    dec = _Decoder(text, backend, atoms)
    exps = []
    ctx = DEFAULT_CONTEXT.with_atoms(**atoms) if atoms else DEFAULT_CONTEXT
    for k, (arg, value) in enumerate(doc.get("exponentials", [])):
        pair = (_Decoder(text, EXACT, atoms).scalar(arg, ["exponentials", k]),
                _Decoder(text, EXACT, atoms).scalar(value, ["exponentials", k]))
        try:
            ctx = ctx.declare(*pair)
        except DuplicateExponential as exc:
            line, col = _locate(text, ["exponentials"])
            raise SpecDuplicateExponential(str(exc), line, col, ["exponentials", k]) from None
        exps.append(pair)

    command = next(cmd for cmd in COMMANDS if cmd in doc)
    block = doc[command]
    path = [command]
    if command == "verify":
        payload = VerifyTask(dec.exppoly(block["f"], path + ["f"]),
                             dec.equation(block["equation"], path + ["equation"]),
                             block.get("precision", "extended"))
    elif command == "search":
        eq = dec.equation(block["equation"], path + ["equation"])
        sp = block["space"]
        try:
            if "lattice" in sp:
                space = AnsatzSpace(tuple(dec.scalar(x, path + ["space", "lattice"])
                                          for x in sp["lattice"]),
                                    sp.get("max_poly_degree", 1), sp.get("max_terms", 2))
            else:
                space = AnsatzSpace.default(dec.scalar(sp["default_c"], path + ["space"]),
                                            sp.get("radius", 4), sp.get("max_poly_degree", 1),
                                            sp.get("max_terms", 2))
        except ValueError as exc:
            dec.fail(path + ["space"], exc)
        options = {k: block[k] for k in ("tol", "starts", "seed", "budget") if k in block}
        payload = SearchTask(eq, space, options)
    else:
        payload = block
    return SpecFile(VERSION, backend, exps, atoms, command, payload, doc.get("eps_zero"))


def _equation_to_json(eq) -> dict:
    if isinstance(eq, FermatEquation):
        return {"type": "fermat", "op": operator_to_json(eq.op), "rhs": exppoly_to_json(eq.rhs)}
    out = {"type": "nonlinear", "m": eq.m, "n": eq.n, "q": exppoly_to_json(eq.q),
           "p": exppoly_to_json(eq.p), "L": operator_to_json(eq.L)}
    if eq.denominator is not None:
        out["denominator"] = exppoly_to_json(eq.denominator)
    return out


def spec_to_json(spec: SpecFile) -> dict:
    doc = {"version": spec.version, "backend": spec.backend}
    if spec.declared_exponentials:
        doc["exponentials"] = [[scalar_to_json(a), scalar_to_json(v)]
                               for a, v in spec.declared_exponentials]
    if spec.atoms:
        doc["atoms"] = {k: scalar_to_json(v) for k, v in spec.atoms.items()}
    if spec.eps_zero is not None:
        doc["eps_zero"] = spec.eps_zero
    p = spec.payload
    if isinstance(p, VerifyTask):
        block = {"f": exppoly_to_json(p.f), "equation": _equation_to_json(p.equation),
                 "precision": p.precision}
    elif isinstance(p, SearchTask):
        block = {"equation": _equation_to_json(p.equation),
                 "space": {"lattice": [scalar_to_json(mu) for mu in p.space.freq_lattice],
                           "max_poly_degree": p.space.max_poly_degree,
                           "max_terms": p.space.max_terms},
                 **p.options}
    else:
        block = p
    doc[spec.command] = block
    return doc


def dump_spec(spec: SpecFile) -> str:
    return json.dumps(spec_to_json(spec), indent=2)
