"""Worked solutions used as the verification corpus.

Each fixture is built from its closed-form data only (the function, the operator
and the constants), never through the builder, so running the corpus checks
the verifier and the builder independently.  Exact fixtures use formal atoms
for symbolic constants, with numeric values supplied for sampling.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exppoly import ExpPoly, ExpTerm, Poly, normalize
from .operators import DiffDelta, LinearShift, MixedDelay
from .scalar import DEFAULT_CONTEXT, EXACT, FLOAT, Context, Scalar
from .verifier import (
    FermatEquation,
    NonlinearShiftEquation,
    verify_factorized,
    verify_fermat,
    verify_nonlinear,
)

I = Scalar.imag_unit()
PI = Scalar.atom("pi")
C = Scalar.atom("c")


def cosh_form(a, eb, Q1=1, Q2=1, backend=EXACT) -> ExpPoly:
    """(Q1 e^b e^{az} + Q2 e^{-b} e^{-az}) / 2 with e^b given as a value."""
    a = Scalar.coerce(a, backend)
    eb = Scalar.coerce(eb, backend)
    half = Scalar.coerce(Fraction(1, 2), backend) if backend == EXACT else Scalar.float(0.5)
    Q1 = Q1 if isinstance(Q1, Poly) else Poly([Q1], backend=backend)
    Q2 = Q2 if isinstance(Q2, Poly) else Poly([Q2], backend=backend)
    return normalize([
        ExpTerm(Poly([x * eb * half for x in Q1.coeffs]), a),
        ExpTerm(Poly([x * eb.inv() * half for x in Q2.coeffs]), -a),
    ])


@dataclass(frozen=True)
class Fixture:
    name: str
    summary: str
    backend: str
    build: Callable  # () -> (f, equation, ctx)


@dataclass
class FixtureResult:
    name: str
    backend: str
    symbolic_pass: bool
    sample_max_abs: float
    factorized: bool | None

    @property
    def passed(self) -> bool:
        agree = self.factorized is None or self.factorized == self.symbolic_pass
        return self.symbolic_pass and self.sample_max_abs < 1e-8 and agree

    def to_json(self) -> dict:
        return {"name": self.name, "backend": self.backend, "symbolic_pass": self.symbolic_pass,
                "sample_max_abs": self.sample_max_abs, "factorized": self.factorized,
                "passed": self.passed}


def _cosh_odd_k():
    f = cosh_form(3, Scalar.atom("e", 2), 2, 3)
    R = Scalar.exact(-1) / (6 * I)
    return f, FermatEquation(DiffDelta(1, I * PI, Poly([R])), 6), DEFAULT_CONTEXT


def _linear_q_periodic():
    a, alpha, beta = Scalar.atom("a"), Scalar.atom("alpha"), Scalar.atom("beta")
    ctx = Context().with_atoms(a=1, c=Scalar.exact(0, 2) * PI, alpha=2, beta=-3)
    ctx = ctx.declare(a * C, 1)
    f = cosh_form(a, Scalar.atom("e"), Poly([0, alpha]), Poly([0, beta]))
    R = Poly([0, (I * a * C).inv()])
    rhs = ExpPoly.poly(Poly([0, 0, alpha * beta]))
    return f, FermatEquation(DiffDelta(1, C, R), rhs), ctx


def _mixed_even_even():
    c = cmath.log(-3 + 2 * math.sqrt(2)) / 2
    f = cosh_form(2.0, cmath.exp(3), 1.0, 1.0, backend=FLOAT)
    R = 1j / math.sqrt(2 ** 7)
    return f, FermatEquation(MixedDelay(2, 2, c, 1.0, 3.0, Poly([R])), 1.0), DEFAULT_CONTEXT


def _mixed_odd_odd():
    f = cosh_form(3, Scalar.atom("e", 4))
    c = I * PI / 3  # e^{3c} = -1
    R = I / 12
    return f, FermatEquation(MixedDelay(1, 3, c, 5, 1, Poly([R])), 1), DEFAULT_CONTEXT


def _mixed_even_odd():
    f = cosh_form(1, Scalar.atom("e", 2))
    c = I * PI / 2
    ctx = DEFAULT_CONTEXT.declare(c, I)
    R = -I / Scalar.exact(3, 1)  # R^2 = -1/(8+6i)
    return f, FermatEquation(MixedDelay(2, 3, c, 1, 3, Poly([R])), 1), ctx


def _mixed_odd_even():
    import mpmath

    with mpmath.workdps(60):
        c_value = -mpmath.log(3) / 2
    ctx = Context().with_atoms(c=c_value).declare(2 * C, Fraction(1, 3))
    f = cosh_form(2, Scalar.atom("e"))
    R = I / 10
    return f, FermatEquation(MixedDelay(1, 2, C, 3, 2, Poly([R])), 1), ctx


def _sine(tau, coeffs):
    def build():
        ctx = Context().with_atoms(c=1)
        a = I * PI / (2 * C)
        ctx = ctx.declare(a * C, I)
        f = cosh_form(a, -I)  # sin(pi z / (2c)) with e^b = 1/i
        return f, FermatEquation(LinearShift(C, coeffs), 1), ctx

    return build


def _quadratic_exp_plus_z():
    ctx = Context().with_atoms(c=2 * PI)
    u = I * PI / C
    f = ExpPoly.exp(u) + ExpPoly.z()
    L = LinearShift(C, (Fraction(9, 4), Fraction(-3, 2), Fraction(-3, 4), 1))
    eq = NonlinearShiftEquation(2, 1, ExpPoly.poly([0, -1]), ExpPoly.exp(2 * u), L)
    return f, eq, ctx


def _linear_z_exp():
    ctx = Context().with_atoms(c=2 * PI)
    u = I * PI / C
    f = ExpPoly.exp(u, Poly([0, 1]))
    L = LinearShift(C, (2, 2, 1))
    p = ExpPoly.exp(u, Poly([0, 2, 1]))
    eq = NonlinearShiftEquation(1, 1, ExpPoly.constant(1), p, L,
                                denominator=ExpPoly.poly([1, 1]))
    return f, eq, ctx


CORPUS = (
    Fixture("cosh_odd_k", "k=1 difference of derivatives, constant Q", EXACT, _cosh_odd_k),
    Fixture("linear_q_periodic", "k=1, linear Q1 and Q2 with e^{ac}=1", EXACT,
            _linear_q_periodic),
    Fixture("mixed_even_even", "mixed delay, m and n even (surd shift)", FLOAT,
            _mixed_even_even),
    Fixture("mixed_odd_odd", "mixed delay, m and n odd", EXACT, _mixed_odd_odd),
    Fixture("mixed_even_odd", "mixed delay, m even and n odd", EXACT, _mixed_even_odd),
    Fixture("mixed_odd_even", "mixed delay, m odd and n even", EXACT, _mixed_odd_even),
    Fixture("sine_shift_tau1", "sine solution, linear shift with tau=1", EXACT,
            _sine(1, (0, -1))),
    Fixture("sine_shift_tau2", "sine solution, linear shift with tau=2", EXACT,
            _sine(2, (1, -1, 1))),
    Fixture("quadratic_exp_plus_z", "m=2, n=1 nonlinear shift equation", EXACT,
            _quadratic_exp_plus_z),
    Fixture("linear_z_exp", "m=n=1 with cleared denominator z+1", EXACT, _linear_z_exp),
)


def get(name: str) -> Fixture:
    for fx in CORPUS:
        if fx.name == name:
            return fx
    raise KeyError(f"no fixture named {name!r}")


def run_fixture(fx: Fixture) -> FixtureResult:
    f, eq, ctx = fx.build()
    if isinstance(eq, FermatEquation):
        report = verify_fermat(f, eq, ctx)
        factorized = verify_factorized(f, eq, ctx)
    else:
        report = verify_nonlinear(f, eq, ctx)
        factorized = None
    return FixtureResult(fx.name, fx.backend, report.symbolic_pass, report.sample_max_abs,
                         factorized)


def run_corpus() -> list:
    return [run_fixture(fx) for fx in CORPUS]
