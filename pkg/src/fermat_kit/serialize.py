"""JSON images of scalars, polynomials, exponential polynomials and operators.

Exact rationals are written as "p/q" strings so round trips are lossless;
atom-bearing exact scalars add a ``terms`` list.  Readers also accept
expression strings such as ``"3*pi*i/c"``.
"""
from __future__ import annotations

from fractions import Fraction

from .exppoly import ExpPoly, ExpTerm, Poly, normalize
from .operators import DiffDelta, Difference, LinearShift, MixedDelay
from .scalar import EXACT, FLOAT, Scalar, parse_scalar


def scalar_to_json(s: Scalar) -> dict:
    if not s.is_exact:
        z = s.to_complex()
        return {"re": z.real, "im": z.imag, "backend": FLOAT}
    terms = s.terms
    re, im = terms.pop((), (Fraction(0), Fraction(0)))
    out = {"re": str(re), "im": str(im), "backend": EXACT}
    if terms:
        out["terms"] = [
            {"re": str(a), "im": str(b), "atoms": {name: e for name, e in mono}}
            for mono, (a, b) in sorted(terms.items())
        ]
    return out


def scalar_from_json(obj, backend: str | None = None, env=None) -> Scalar:
    if isinstance(obj, Scalar):
        return Scalar.coerce(obj, backend)
    if isinstance(obj, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(obj, str):
        return parse_scalar(obj, backend or EXACT, env)
    if isinstance(obj, int):
        return Scalar.coerce(obj, backend or EXACT)
    if isinstance(obj, float):
        return Scalar.coerce(obj, backend or FLOAT)
    if isinstance(obj, dict):
        b = obj.get("backend", backend or EXACT)
        if backend is not None and b != backend:
            raise ValueError(f"scalar tagged {b!r} inside a {backend!r} document")
        if b == FLOAT:
            return Scalar.float(float(obj.get("re", 0)), float(obj.get("im", 0)))
        s = Scalar.exact(Fraction(str(obj.get("re", 0))), Fraction(str(obj.get("im", 0))))
        for t in obj.get("terms", ()):
            mono = Scalar.exact(Fraction(str(t.get("re", 0))), Fraction(str(t.get("im", 0))))
            for name, e in t.get("atoms", {}).items():
                mono = mono * Scalar.atom(name, int(e))
            s = s + mono
        return s
    raise TypeError(f"cannot read a scalar from {type(obj).__name__}")


def poly_to_json(p: Poly) -> list:
    return [scalar_to_json(c) for c in p.coeffs]


def poly_from_json(obj, backend=None, env=None) -> Poly:
    if isinstance(obj, list):
        return Poly([scalar_from_json(c, backend, env) for c in obj], backend=backend)
    return Poly([scalar_from_json(obj, backend, env)], backend=backend)


def exppoly_to_json(f: ExpPoly) -> list:
    return [{"poly": poly_to_json(p), "freq": scalar_to_json(mu)} for p, mu in f.terms]


def exppoly_from_json(obj, backend=None, env=None) -> ExpPoly:
    """A list of {"poly", "freq"} terms; a bare scalar or list is a polynomial."""
    if isinstance(obj, list) and all(isinstance(t, dict) and "poly" in t for t in obj):
        terms = [
            ExpTerm(poly_from_json(t["poly"], backend, env),
                    scalar_from_json(t.get("freq", 0), backend, env))
            for t in obj
        ]
        return normalize(terms)
    return ExpPoly.poly(poly_from_json(obj, backend, env))


def operator_to_json(op) -> dict:
    if isinstance(op, LinearShift):
        return {"type": "LinearShift", "c": scalar_to_json(op.c),
                "coeffs": [scalar_to_json(a) for a in op.coeffs]}
    if isinstance(op, Difference):
        return {"type": "Difference", "c": scalar_to_json(op.c), "P": poly_to_json(op.P)}
    if isinstance(op, DiffDelta):
        return {"type": "DiffDelta", "k": op.k, "c": scalar_to_json(op.c), "R": poly_to_json(op.R)}
    if isinstance(op, MixedDelay):
        return {"type": "MixedDelay", "m": op.m, "n": op.n, "c": scalar_to_json(op.c),
                "A": scalar_to_json(op.A), "B": scalar_to_json(op.B), "R": poly_to_json(op.R)}
    raise TypeError(f"not an operator: {op!r}")


def operator_from_json(obj: dict, backend=None, env=None):
    kind = obj.get("type")

    def sc(key):
        return scalar_from_json(obj[key], backend, env)

    def pl(key):
        return poly_from_json(obj[key], backend, env)

    if kind == "LinearShift":
        return LinearShift(sc("c"), tuple(scalar_from_json(a, backend, env) for a in obj["coeffs"]))
    if kind == "Difference":
        return Difference(sc("c"), pl("P"))
    if kind == "DiffDelta":
        return DiffDelta(obj["k"], sc("c"), pl("R"))
    if kind == "MixedDelay":
        return MixedDelay(obj["m"], obj["n"], sc("c"), sc("A"), sc("B"), pl("R"))
    raise ValueError(f"unknown operator type {kind!r}")
