"""The four operator families acting on exponential polynomials.

LinearShift   sum_j a_j f(z + j c)
Difference    P(z) (f(z + c) - f(z))
DiffDelta     R(z) (f^(k)(z + c) - f^(k)(z))
MixedDelay    R(z) (A f^(m)(z + c) + B f^(n)(z))
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InvalidOperator
from .exppoly import ExpPoly, Poly, ep_add, ep_derive, ep_mul, ep_scale, ep_shift
from .scalar import DEFAULT_CONTEXT, EXACT, Context, Scalar


def _scalar(x, backend=None) -> Scalar:
    return Scalar.coerce(x, backend)


def _poly(x, backend=None) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (list, tuple)):
        return Poly(x, backend=backend)
    return Poly([x], backend=backend)


def _nonzero(name, s: Scalar):
    if s.is_zero(0.0):
        raise InvalidOperator(f"{name} must be nonzero")


@dataclass(frozen=True)
class LinearShift:
    c: Scalar
    coeffs: tuple

    def __post_init__(self):
        c = _scalar(self.c)
        backend = c.backend
        coeffs = tuple(_scalar(a, backend) for a in self.coeffs)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "coeffs", coeffs)
        _nonzero("c", c)
        if len(coeffs) < 2:
            raise InvalidOperator("a linear shift needs tau >= 1 (at least two coefficients)")
        if coeffs[-1].is_zero(0.0):
            raise InvalidOperator("leading coefficient a_tau must be nonzero")

    @property
    def tau(self) -> int:
        return len(self.coeffs) - 1

    @property
    def backend(self):
        return self.c.backend


@dataclass(frozen=True)
class Difference:
    c: Scalar
    P: Poly

    def __post_init__(self):
        c = _scalar(self.c)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "P", _poly(self.P, c.backend))
        _nonzero("c", c)
        if self.P.is_zero():
            raise InvalidOperator("P must be a nonzero polynomial")

    @property
    def backend(self):
        return self.c.backend


@dataclass(frozen=True)
class DiffDelta:
    k: int
    c: Scalar
    R: Poly

    def __post_init__(self):
        c = _scalar(self.c)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "R", _poly(self.R, c.backend))
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidOperator("k must be a natural number >= 1")
        _nonzero("c", c)
        if self.R.is_zero():
            raise InvalidOperator("R must be a nonzero polynomial")

    @property
    def backend(self):
        return self.c.backend


@dataclass(frozen=True)
class MixedDelay:
    m: int
    n: int
    c: Scalar
    A: Scalar
    B: Scalar
    R: Poly

    def __post_init__(self):
        c = _scalar(self.c)
        b = c.backend
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", _scalar(self.A, b))
        object.__setattr__(self, "B", _scalar(self.B, b))
        object.__setattr__(self, "R", _poly(self.R, b))
        for name in ("m", "n"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidOperator(f"{name} must be a natural number (0 allowed)")
        _nonzero("c", c)
        _nonzero("A", self.A)
        _nonzero("B", self.B)
        if self.R.is_zero():
            raise InvalidOperator("R must be a nonzero polynomial")

    @property
    def backend(self):
        return self.c.backend


OperatorSpec = Union[LinearShift, Difference, DiffDelta, MixedDelay]


def apply(op: OperatorSpec, f: ExpPoly, ctx: Context | None = None) -> ExpPoly:
    """Apply ``op`` to ``f``; the result is canonical."""
    ctx = ctx or DEFAULT_CONTEXT
    if isinstance(op, LinearShift):
        acc = ExpPoly.zero()
        for j, a in enumerate(op.coeffs):
            if a.is_zero(0.0):
                continue
            shifted = f if j == 0 else ep_shift(f, op.c * j, ctx)
            acc = ep_add(acc, ep_scale(shifted, a, ctx), ctx)
        return acc
    if isinstance(op, Difference):
        d = ep_add(ep_shift(f, op.c, ctx), -f, ctx)
        return ep_mul(ExpPoly.poly(op.P), d, ctx)
    if isinstance(op, DiffDelta):
        fk = ep_derive(f, op.k, ctx)
        d = ep_add(ep_shift(fk, op.c, ctx), -fk, ctx)
        return ep_mul(ExpPoly.poly(op.R), d, ctx)
    if isinstance(op, MixedDelay):
        fm = ep_shift(ep_derive(f, op.m, ctx), op.c, ctx)
        fn = ep_derive(f, op.n, ctx)
        inner = ep_add(ep_scale(fm, op.A, ctx), ep_scale(fn, op.B, ctx), ctx)
        return ep_mul(ExpPoly.poly(op.R), inner, ctx)
    raise InvalidOperator(f"unknown operator {op!r}")


def delta_c(f: ExpPoly, c, ctx: Context | None = None) -> ExpPoly:
    """f(z + c) - f(z)."""
    backend = f.backend or (c.backend if isinstance(c, Scalar) else EXACT)
    return apply(LinearShift(Scalar.coerce(c, backend), (-1, 1)), f, ctx)


def shift_amounts(op: OperatorSpec) -> list:
    """Multiples of c at which the operator samples f."""
    if isinstance(op, LinearShift):
        return [op.c * j for j in range(op.tau + 1)]
    return [op.c * 0, op.c]
