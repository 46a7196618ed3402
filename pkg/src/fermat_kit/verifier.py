"""Residual checks for Fermat-type and nonlinear c-shift equations.

Every check runs twice: symbolically (the canonical residual must have no
terms) and numerically through the pointwise oracle in :mod:`sampling`,
which shares no code with the symbolic path beyond coefficient storage.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BackendMismatch, EvalOverflow, InvalidEquation, NonExactExponential
from .exppoly import ExpPoly, Poly, ep_add, ep_mul, ep_pow, ep_scale, growth_order
from .operators import DiffDelta, Difference, LinearShift, MixedDelay, OperatorSpec, apply
from .sampling import DEFAULT_DPS, EXTENDED, Numeric, NumericExpPoly, vogel_points
from .scalar import DEFAULT_CONTEXT, EXACT, Context, Scalar

SAMPLE_TOL = 1e-8
MIN_POINTS = 16

_HINT = (
    "declare the value with Context.declare(arg, value) (or 'exponentials' in the "
    "spec file), or rerun with the float backend"
)


def _as_exppoly(x, backend) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, Poly):
        return ExpPoly.poly(x)
    return ExpPoly.constant(x, backend=backend)


def _backend(*objs):
    found = None
    for o in objs:
        b = getattr(o, "backend", None)
        if b is None:
            continue
        if found is None:
            found = b
        elif b != found:
            raise BackendMismatch(f"equation mixes {found} and {b} data")
    return found


@dataclass(frozen=True)
class FermatEquation:
    """f^2 + (op f)^2 = rhs."""

    op: OperatorSpec
    rhs: ExpPoly

    def __post_init__(self):
        rhs = _as_exppoly(self.rhs, self.op.backend)
        if rhs.is_zero():
            raise InvalidEquation("the right-hand side Q must be nonzero")
        object.__setattr__(self, "rhs", rhs)
        _backend(self.op, rhs)

    @property
    def backend(self):
        return self.op.backend


@dataclass(frozen=True)
class NonlinearShiftEquation:
    """d f^m + q (L f)^n = p, with d = 1 unless a denominator was cleared."""

    m: int
    n: int
    q: ExpPoly
    p: ExpPoly
    L: LinearShift
    denominator: ExpPoly | None = None

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InvalidEquation(f"{name} must be a natural number >= 1")
        if not isinstance(self.L, LinearShift):
            raise InvalidEquation("L must be a LinearShift operator")
        b = self.L.backend
        q = _as_exppoly(self.q, b)
        if q.is_zero():
            raise InvalidEquation("q must be nonzero")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", _as_exppoly(self.p, b))
        if self.denominator is not None:
            d = _as_exppoly(self.denominator, b)
            if d.is_zero():
                raise InvalidEquation("the cleared denominator must be nonzero")
            object.__setattr__(self, "denominator", d)
        _backend(self.L, self.q, self.p, self.denominator)

    @property
    def backend(self):
        return self.L.backend


Equation = FermatEquation | NonlinearShiftEquation


@dataclass
class VerificationReport:
    residual: ExpPoly
    symbolic_pass: bool
    sample_max_abs: float
    sample_points: list = field(default_factory=list)
    growth_order: int = 0
    precision: str = EXTENDED

    @property
    def passed(self) -> bool:
        return self.symbolic_pass and self.sample_max_abs < SAMPLE_TOL

    def to_json(self) -> dict:
        from .serialize import exppoly_to_json

        return {
            "symbolic_pass": self.symbolic_pass,
            "residual": exppoly_to_json(self.residual),
            "sample_max_abs": self.sample_max_abs,
            "sample_points": [[p.to_complex().real, p.to_complex().imag] for p in self.sample_points],
            "growth_order": self.growth_order,
            "precision": self.precision,
            "passed": self.passed,
        }


def _with_hint(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NonExactExponential as exc:
            raise NonExactExponential(exc.arg, _HINT) from None

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_with_hint
def fermat_residual(f: ExpPoly, eq: FermatEquation, ctx: Context | None = None) -> ExpPoly:
    ctx = ctx or DEFAULT_CONTEXT
    _backend(f, eq.op, eq.rhs)
    g = apply(eq.op, f, ctx)
    return ep_add(ep_add(ep_mul(f, f, ctx), ep_mul(g, g, ctx), ctx), -eq.rhs, ctx)


@_with_hint
def nonlinear_residual(f: ExpPoly, eq: NonlinearShiftEquation, ctx: Context | None = None) -> ExpPoly:
    ctx = ctx or DEFAULT_CONTEXT
    _backend(f, eq.L, eq.q, eq.p)
    lhs = ep_pow(f, eq.m, ctx)
    if eq.denominator is not None:
        lhs = ep_mul(eq.denominator, lhs, ctx)
    shifted = ep_pow(apply(eq.L, f, ctx), eq.n, ctx)
    return ep_add(ep_add(lhs, ep_mul(eq.q, shifted, ctx), ctx), -eq.p, ctx)


def _report(f, residual, eq, ctx, points, precision, dps) -> VerificationReport:
    pts = vogel_points() if points is None else list(points)
    if len(pts) < MIN_POINTS:
        raise ValueError(f"at least {MIN_POINTS} sample points are required")
    value = sample_residual(f, eq, pts, ctx, precision=precision, dps=dps)
    return VerificationReport(
        residual=residual,
        symbolic_pass=residual.is_zero(),
        sample_max_abs=value,
        sample_points=[Scalar.from_complex(complex(z)) for z in pts],
        growth_order=growth_order(f),
        precision=precision,
    )


def verify_fermat(f: ExpPoly, eq: FermatEquation, ctx: Context | None = None, points=None,
                  precision: str = EXTENDED, dps: int = DEFAULT_DPS) -> VerificationReport:
    """Check f^2 + (op f)^2 = Q symbolically and at sample points."""
    f = _as_exppoly(f, eq.backend)
    residual = fermat_residual(f, eq, ctx)
    return _report(f, residual, eq, ctx, points, precision, dps)


def verify_factorized(f: ExpPoly, eq: FermatEquation, ctx: Context | None = None) -> bool:
    """Check (f + i g)(f - i g) = Q with g = op f; agrees with verify_fermat."""
    ctx = ctx or DEFAULT_CONTEXT
    f = _as_exppoly(f, eq.backend)
    try:
        _backend(f, eq.op, eq.rhs)
        g = apply(eq.op, f, ctx)
    except NonExactExponential as exc:
        raise NonExactExponential(exc.arg, _HINT) from None
    ig = ep_scale(g, Scalar.imag_unit(g.backend or eq.backend or EXACT), ctx)
    prod = ep_mul(ep_add(f, ig, ctx), ep_add(f, -ig, ctx), ctx)
    return ep_add(prod, -eq.rhs, ctx).is_zero()


def verify_nonlinear(f: ExpPoly, eq: NonlinearShiftEquation, ctx: Context | None = None,
                     points=None, precision: str = EXTENDED,
                     dps: int = DEFAULT_DPS) -> VerificationReport:
    """Check d f^m + q (L f)^n = p symbolically and at sample points."""
    f = _as_exppoly(f, eq.backend)
    residual = nonlinear_residual(f, eq, ctx)
    return _report(f, residual, eq, ctx, points, precision, dps)


# -- numeric oracle -------------------------------------------------------------


def _operator_values(op, F: NumericExpPoly, zs, num: Numeric):
    c = num.scalar(op.c)
    if isinstance(op, LinearShift):
        total = None
        for j, a in enumerate(op.coeffs):
            term = num.scalar(a) * F(zs + j * c)
            total = term if total is None else total + term
        return total
    if isinstance(op, Difference):
        return NumericExpPoly(op.P, num)(zs) * (F(zs + c) - F(zs))
    if isinstance(op, DiffDelta):
        return NumericExpPoly(op.R, num)(zs) * (F(zs + c, op.k) - F(zs, op.k))
    if isinstance(op, MixedDelay):
        inner = num.scalar(op.A) * F(zs + c, op.m) + num.scalar(op.B) * F(zs, op.n)
        return NumericExpPoly(op.R, num)(zs) * inner
    raise InvalidEquation(f"unknown operator {op!r}")


def sample_residual(f: ExpPoly, eq: Equation, points=None, ctx: Context | None = None,
                    precision: str = EXTENDED, dps: int = DEFAULT_DPS) -> float:
    """max |residual(z_i)| over the sample points, evaluated pointwise.

    Exact data is mapped to numbers through ``ctx.env`` (values for pi, e and
    any user atoms).  ``precision="extended"`` evaluates in mpmath at ``dps``
    digits, ``"double"`` in binary64 through the compiled kernel.
    """
    ctx = ctx or DEFAULT_CONTEXT
    pts = vogel_points() if points is None else list(points)
    num = Numeric(precision, env=ctx.env, dps=dps)
    with num.context():
        zs = num.points(pts)
        F = NumericExpPoly(_as_exppoly(f, eq.backend), num)
        fz = F(zs)
        if isinstance(eq, FermatEquation):
            g = _operator_values(eq.op, F, zs, num)
            res = fz * fz + g * g - NumericExpPoly(eq.rhs, num)(zs)
        else:
            g = _operator_values(eq.L, F, zs, num)
            lhs = fz ** eq.m
            if eq.denominator is not None:
                lhs = NumericExpPoly(eq.denominator, num)(zs) * lhs
            res = lhs + NumericExpPoly(eq.q, num)(zs) * g ** eq.n - NumericExpPoly(eq.p, num)(zs)
        if isinstance(res, np.ndarray) and res.dtype != object and not np.all(np.isfinite(res)):
            raise EvalOverflow("non-finite residual in double precision")
        return num.abs_max(res)
