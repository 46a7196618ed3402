"""Constructive solvers for the Fermat-type delay-differential equations.

All families are cosh forms f = (Q1 e^{az+b} + Q2 e^{-(az+b)})/2.  Writing
f + i g and f - i g with g the operator image, f^2 + g^2 = Q splits into
coefficient conditions at e^{2(az+b)}, e^0 and e^{-2(az+b)}; each builder
solves those conditions, records their residuals as side conditions and then
hands the assembled equation to the verifier.

For the mixed operator R (A f^(m)(z+c) + B f^(n)(z)) with X = a^m A,
Y = a^n B and w = e^{ac} the conditions reduce to

    i R (X w + Y) = 1,
    i R ((-1)^m X / w + (-1)^n Y) = -1,

so w solves  X w^2 + (1 + (-1)^n) Y w + (-1)^m X = 0  and R = -i/(X w + Y).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb

import mpmath

from .errors import (
    ConsistencyFailure,
    DegenerateParameters,
    EvenK,
    ExclusionViolated,
    Infeasible,
    LeadingCoefficientZero,
    NonExactExponential,
    NonPolynomialQuotient,
    ZeroW,
)
from .exppoly import ExpPoly, ExpTerm, Poly, normalize, poly_add, poly_derive, poly_divmod
from .exppoly import poly_mul, poly_scale, poly_shift
from .operators import DiffDelta, LinearShift, MixedDelay
from .scalar import DEFAULT_CONTEXT, EXACT, FLOAT, Context, Scalar
from .verifier import FermatEquation, VerificationReport, verify_fermat

FLOAT_SIDE_TOL = 1e-12


# -- shared pieces ------------------------------------------------------------------


@dataclass(frozen=True)
class CoshForm:
    """f = (Q1 e^{az+b} + Q2 e^{-(az+b)}) / 2.

    ``eb`` optionally fixes the value of e^b when b itself has no exact
    exponential (for instance e^b = -i for the sine family).
    """

    a: Scalar
    b: Scalar
    Q1: Poly
    Q2: Poly
    eb: Scalar | None = None

    def __post_init__(self):
        a = Scalar.coerce(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", Scalar.coerce(self.b, a.backend))
        for name in ("Q1", "Q2"):
            q = getattr(self, name)
            q = q if isinstance(q, Poly) else Poly([q], backend=a.backend)
            if q.is_zero():
                raise DegenerateParameters(f"{name} must be nonzero")
            object.__setattr__(self, name, q)
        if a.is_zero(0.0):
            raise DegenerateParameters("a must be nonzero")
        if self.eb is not None:
            object.__setattr__(self, "eb", Scalar.coerce(self.eb, a.backend))

    @property
    def backend(self):
        return self.a.backend

    def exp_b(self, ctx: Context | None = None) -> Scalar:
        return self.eb if self.eb is not None else (ctx or DEFAULT_CONTEXT).exp(self.b)

    def render(self, ctx: Context | None = None) -> ExpPoly:
        ctx = ctx or DEFAULT_CONTEXT
        eb = self.exp_b(ctx)
        half = Scalar.coerce(1, self.backend) / 2
        return normalize(
            [
                ExpTerm(poly_scale(self.Q1, eb * half), self.a),
                ExpTerm(poly_scale(self.Q2, eb.inv() * half), -self.a),
            ],
            ctx,
        )


@dataclass
class SolutionFamily:
    f: CoshForm
    op: object
    rhs: ExpPoly
    side_conditions: list = field(default_factory=list)
    exclusions_checked: list = field(default_factory=list)
    ctx: Context = DEFAULT_CONTEXT
    report: VerificationReport | None = None
    params: dict = field(default_factory=dict)

    @property
    def solution(self) -> ExpPoly:
        return self.f.render(self.ctx)

    @property
    def equation(self) -> FermatEquation:
        return FermatEquation(self.op, self.rhs)

    def side_residuals_ok(self, tol: float = FLOAT_SIDE_TOL) -> bool:
        return all(r.is_zero(tol) for _, r in self.side_conditions)

    @property
    def exclusions_ok(self) -> bool:
        return all(ok for _, ok in self.exclusions_checked)


def _zero(s: Scalar, ctx: Context, scale: float = 1.0) -> bool:
    if s.is_exact:
        return s.is_zero()
    return s.is_zero(ctx.eps_zero * max(1.0, scale))


def _ensure_exponential(ctx: Context, arg: Scalar, value: Scalar) -> Context:
    """Make e^arg = value available to exact shifts, declaring it if needed."""
    if not arg.is_exact:
        return ctx
    try:
        known = ctx.exp(arg)
    except NonExactExponential:
        return ctx.declare(arg, value)
    if known != value:
        raise DegenerateParameters(f"e^({arg}) is {known}, not the required {value}")
    return ctx


def _finish(family: SolutionFamily, verify: bool, points=None) -> SolutionFamily:
    if not verify:
        return family
    report = verify_fermat(family.solution, family.equation, family.ctx, points=points)
    family.report = report
    if not report.passed:
        raise ConsistencyFailure(
            f"assembled equation does not verify (sample max {report.sample_max_abs:.3g})",
            report,
        )
    return family


def ac_to_c(w, a, branch_k: int = 0, env=None) -> Scalar:
    """c with e^{ac} = w: (Log w + 2 pi i k) / a on the principal log branch."""
    w = Scalar.coerce(w)
    a = Scalar.coerce(a, w.backend) if isinstance(a, Scalar) and a.backend == w.backend \
        else Scalar.coerce(a)
    wz = w.to_complex(env)
    az = a.to_complex(env)
    if wz == 0:
        raise ZeroW("e^{ac} = 0 has no solution")
    if az == 0:
        raise DegenerateParameters("a must be nonzero")
    return Scalar.from_complex((cmath.log(wz) + 2j * math.pi * branch_k) / az)


def _ac_to_c_precise(w: Scalar, a: Scalar, branch_k: int, env, dps: int = 60):
    """ac_to_c at ``dps`` digits, used as the numeric value of a formal shift atom."""
    with mpmath.workdps(dps):
        wz = w.to_mpc(env)
        if wz == 0:
            raise ZeroW("e^{ac} = 0 has no solution")
        return (mpmath.log(wz) + 2j * mpmath.pi * branch_k) / a.to_mpc(env)


# -- k-th order difference of derivatives -----------------------------------------


def build_case_i(k: int, c, branch_m: int, Q1, Q2, b=0, ctx: Context | None = None,
                 verify: bool = True, points=None) -> SolutionFamily:
    """Constant Q1, Q2 with a = (2m+1) pi i / c and R = i / (2 a^k)."""
    ctx = ctx or DEFAULT_CONTEXT
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a natural number >= 1")
    if k % 2 == 0:
        raise EvenK(f"k = {k} is even; constant-coefficient solutions need odd k")
    c = Scalar.coerce(c)
    backend = c.backend
    if c.is_zero(0.0):
        raise DegenerateParameters("c must be nonzero")
    Q1 = Scalar.coerce(Q1, backend)
    Q2 = Scalar.coerce(Q2, backend)
    if Q1.is_zero(0.0) or Q2.is_zero(0.0):
        raise DegenerateParameters("Q1 and Q2 must be nonzero")
    i = Scalar.imag_unit(backend)
    a = Scalar.coerce(2 * branch_m + 1, backend) * Scalar.pi(backend) * i / c
    R = i / (2 * a ** k)
    form = CoshForm(a, Scalar.coerce(b, backend), Poly([Q1]), Poly([Q2]))
    op = DiffDelta(k, c, Poly([R]))
    family = SolutionFamily(
        f=form,
        op=op,
        rhs=ExpPoly.constant(Q1 * Q2),
        side_conditions=[
            ("leading_relation", 2 * i * R * a ** k + 1),
            ("shift_is_minus_one", ctx.exp(a * c) + 1),
        ],
        exclusions_checked=[("k_odd", True)],
        ctx=ctx,
        params={"a": a, "R": R, "Q": Q1 * Q2},
    )
    return _finish(family, verify, points)


def difference_image(x: Poly, k: int, a: Scalar, c: Scalar, ctx: Context | None = None) -> Poly:
    """i * sum_l C(k,l) a^(k-l) (x^(l)(z+c) - x^(l)(z))."""
    acc = Poly._raw(())
    for l in range(k + 1):
        d = poly_derive(x, l)
        if d.is_zero():
            break
        delta = poly_add(poly_shift(d, c, ctx), -d, ctx)
        acc = poly_add(acc, poly_scale(delta, a ** (k - l) * comb(k, l), ctx), ctx)
    return poly_scale(acc, Scalar.imag_unit(a.backend), ctx)


def build_case_ii(k: int, a, c, Q1, Q2, b=0, ctx: Context | None = None, verify: bool = True,
                  points=None, eb=None) -> SolutionFamily:
    """Polynomial Q1, Q2 with e^{ac} = 1 and R = Q1 / P(Q1).

    The e^{-2(az+b)} condition asks for R P'(Q2) = -Q2, where P' uses -a in
    place of a.  It is checked directly and the assembled equation is
    verified before the family is returned.
    """
    ctx = ctx or DEFAULT_CONTEXT
    a = Scalar.coerce(a)
    backend = a.backend
    c = Scalar.coerce(c, backend)
    Q1 = Q1 if isinstance(Q1, Poly) else Poly(Q1 if isinstance(Q1, (list, tuple)) else [Q1],
                                              backend=backend)
    Q2 = Q2 if isinstance(Q2, Poly) else Poly(Q2 if isinstance(Q2, (list, tuple)) else [Q2],
                                              backend=backend)
    if Q1.degree < 1 or Q2.degree < 1:
        raise DegenerateParameters("Q1 and Q2 must both be non-constant polynomials")
    if a.is_zero(0.0) or c.is_zero(0.0):
        raise DegenerateParameters("a and c must be nonzero")
    one = Scalar.one(backend)
    if backend == EXACT:
        ctx = _ensure_exponential(ctx, a * c, one)
    elif not ctx.exp(a * c).close(one, ctx.eps_zero):
        raise DegenerateParameters(f"e^(ac) = {ctx.exp(a * c)} but must equal 1")

    P1 = difference_image(Q1, k, a, c, ctx)
    if P1.is_zero():
        raise NonPolynomialQuotient("P(Q1) vanishes identically")
    R, rem = poly_divmod(Q1, P1, ctx)
    if not rem.is_zero():
        raise NonPolynomialQuotient(f"Q1 = {Q1} is not divisible by P(Q1) = {P1}")
    P2 = difference_image(Q2, k, -a, c, ctx)
    second = poly_add(poly_mul(R, P2, ctx), Q2, ctx)
    form = CoshForm(a, Scalar.coerce(b, backend), Q1, Q2, eb=eb)
    op = DiffDelta(k, c, R)
    rhs = ExpPoly.poly(poly_mul(Q1, Q2, ctx))
    family = SolutionFamily(
        f=form,
        op=op,
        rhs=rhs,
        side_conditions=[("shift_is_one", ctx.exp(a * c) - one)]
        + [(f"conjugate_side_z^{j}", s) for j, s in enumerate(second.coeffs)],
        exclusions_checked=[("Q1_nonconstant", True), ("Q2_nonconstant", True)],
        ctx=ctx,
        params={"R": R, "P(Q1)": P1, "P(Q2)": P2},
    )
    if not second.is_zero():
        report = None
        if verify:
            report = verify_fermat(family.solution, family.equation, ctx, points=points)
        raise ConsistencyFailure(
            f"R = {R} fails the e^(-2(az+b)) condition: R*P(Q2) + Q2 = {second}", report
        )
    return _finish(family, verify, points)


# -- mixed delay operator -------------------------------------------------------------------


def mixed_case(m: int, n: int) -> str:
    return {(0, 0): "I", (1, 1): "II", (0, 1): "III", (1, 0): "IV"}[(m % 2, n % 2)]


def _sqrt(s: Scalar):
    """Exact square root when it exists, else None."""
    return s.sqrt() if not s.is_exact else s.sqrt_exact()


def build_mixed(m: int, n: int, A, B, a, b=0, branch: int = 1, ctx: Context | None = None,
                branch_k: int = 0, verify: bool = True, points=None,
                c_name: str = "c") -> SolutionFamily:
    """f = cosh(az+b) for R (A f^(m)(z+c) + B f^(n)(z)), with the Case chosen by parity.

    ``branch`` (+1 or -1) picks the root for e^{ac}.  Exact input stays exact
    when every quantity is a Gaussian rational; the shift c is then a formal
    atom with e^{a c} declared, and its numeric value (for sampling) comes
    from :func:`ac_to_c` with ``branch_k``.  Surds switch the build to float.
    """
    ctx = ctx or DEFAULT_CONTEXT
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    for name, v in (("m", m), ("n", n)):
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a natural number")
    A, B, a, b = (Scalar.coerce(x) for x in (A, B, a, b))
    backend = EXACT
    if any(not x.is_exact for x in (A, B, a, b)):
        A, B, a, b = (x.to_float(ctx.env) for x in (A, B, a, b))
        backend = FLOAT
    for name, v in (("A", A), ("B", B), ("a", a)):
        if v.is_zero(0.0):
            raise DegenerateParameters(f"{name} must be nonzero")

    case = mixed_case(m, n)
    w = _mixed_root(case, m, n, A, B, a, branch, ctx)
    if w is None:
        # the root is a surd: redo everything in binary64
        A, B, a, b = (x.to_float(ctx.env) for x in (A, B, a, b))
        backend = FLOAT
        w = _mixed_root(case, m, n, A, B, a, branch, ctx)
    X = a ** m * A
    Y = a ** n * B
    scale = max(abs(X.to_complex(ctx.env)), abs(Y.to_complex(ctx.env)), 1.0)

    if _zero(X * w + Y, ctx, scale):
        raise DegenerateParameters(
            f"Case {case}: X e^(ac) + Y = 0 for this branch (a^(m-n) = -e^(-ac) B/A)"
        )
    i = Scalar.imag_unit(backend)
    R = -i / (X * w + Y)

    sign_m = 1 if m % 2 == 0 else -1
    sign_n = 1 if n % 2 == 0 else -1
    side = [
        ("shift_relation", i * R * (X * w + Y) - 1),
        ("conjugate_relation", i * R * (X * w.inv() * sign_m + Y * sign_n) + 1),
        ("root_equation", X * w * w + Y * w * (1 + sign_n) + X * sign_m),
    ]
    if case == "I":
        side.append(("closed_form_R2", R * R - (X * X - Y * Y).inv()))
    elif case == "IV":
        side.append(("closed_form_R2", R * R + (X * X + Y * Y).inv()))

    neg_y_over_x = -Y / X
    conj_root = X / Y * (-sign_m * sign_n)
    exclusions = [
        ("w_not_neg_Y_over_X", not w.close(neg_y_over_x, ctx.eps_zero * scale)),
        ("w_not_conjugate_root", not w.close(conj_root, ctx.eps_zero * scale)),
    ]
    diagnostics = {}
    if case == "I":
        one = Scalar.one(backend)
        exclusions.append(("w_not_plus_minus_one",
                           not (w.close(one, ctx.eps_zero) or w.close(-one, ctx.eps_zero))))
        ratio = X / Y
        diagnostics["w_in_unsigned_ratio_set"] = (
            w.close(ratio, ctx.eps_zero * scale) or w.close(ratio.inv(), ctx.eps_zero * scale)
        )
    for name, ok in exclusions:
        if not ok:
            raise ExclusionViolated(f"Case {case}: e^(ac) = {w} violates {name}")

    if backend == EXACT:
        c = Scalar.atom(c_name)
        c_value = _ac_to_c_precise(w, a, branch_k, ctx.env)
        c_zero = c_value == 0
        ctx = ctx.with_atoms(**{c_name: c_value})
        ctx = _ensure_exponential(ctx, a * c, w)
    else:
        c = ac_to_c(w, a, branch_k, ctx.env)
        c_zero = c.is_zero(0.0)
    if c_zero:
        raise DegenerateParameters("e^(ac) = 1 on branch_k = 0 gives c = 0; pick branch_k != 0")
    form = CoshForm(a, b, Poly([Scalar.one(backend)]), Poly([Scalar.one(backend)]))
    op = MixedDelay(m, n, c, A, B, Poly([R]))
    family = SolutionFamily(
        f=form,
        op=op,
        rhs=ExpPoly.constant(Scalar.one(backend)),
        side_conditions=side,
        exclusions_checked=exclusions,
        ctx=ctx,
        params={"case": case, "w": w, "R": R, "R2": R * R, "X": X, "Y": Y, "c": c,
                "backend": backend, **diagnostics},
    )
    return _finish(family, verify, points)


def _mixed_root(case, m, n, A, B, a, branch, ctx):
    X = a ** m * A
    Y = a ** n * B
    backend = X.backend
    scale = max(abs(X.to_complex(ctx.env)), abs(Y.to_complex(ctx.env)), 1.0) ** 2
    if case == "I":
        disc = Y * Y - X * X
        if _zero(disc, ctx, scale):
            raise DegenerateParameters("Case I needs a^(m-n) != +-B/A")
        root = _sqrt(disc)
        return None if root is None else (-Y + root * branch) / X
    if case == "II":
        return Scalar.coerce(branch, backend)
    if case == "III":
        return Scalar.imag_unit(backend) * branch
    disc = Y * Y + X * X
    if _zero(disc, ctx, scale):
        raise DegenerateParameters("Case IV needs a^(m-n) != +-iB/A")
    root = _sqrt(disc)
    return None if root is None else (-Y + root * branch) / X


# -- linear shift operator ---------------------------------------------------------------


def _rref(M, rhs, eps):
    """Reduced row echelon form over Scalars; returns pivots, rows, rhs, consistent."""
    M = [list(r) for r in M]
    rhs = list(rhs)
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for col in range(cols):
        cand = [k for k in range(r, rows) if not M[k][col].is_zero(eps)]
        if not cand:
            continue
        if M[cand[0]][col].is_exact:
            mono = [k for k in cand if M[k][col].is_monomial()]
            piv = mono[0] if mono else cand[0]
        else:
            piv = max(cand, key=lambda k: abs(M[k][col].to_complex()))
        M[r], M[piv] = M[piv], M[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = M[r][col].inv()
        M[r] = [x * inv for x in M[r]]
        rhs[r] = rhs[r] * inv
        for k in range(rows):
            if k != r and not M[k][col].is_zero(eps):
                f = M[k][col]
                M[k] = [x - f * y for x, y in zip(M[k], M[r])]
                rhs[k] = rhs[k] - f * rhs[r]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    consistent = all(rhs[k].is_zero(eps) for k in range(r, rows))
    return pivots, M, rhs, consistent


def _is_difference_pins(tau, pinned) -> bool:
    if tau != 1 or set(pinned) != {0, 1}:
        return False
    return pinned[0] == -1 and pinned[1] == 1


def shift_system_certificate(coeffs) -> dict:
    """Decide whether some w != 0 satisfies both shift equations for fixed a_j.

    g1(w) = sum a_j w^j + i and g2(w) = sum a_j w^(tau-j) - i w^tau; a common
    nonzero root exists iff their gcd, with factors of w removed, is not
    constant.  Exact coefficients only.
    """
    coeffs = [Scalar.coerce(a, EXACT) for a in coeffs]
    tau = len(coeffs) - 1
    i = Scalar.imag_unit()
    g1 = Poly([coeffs[0] + i] + coeffs[1:])
    rev = list(reversed(coeffs))
    rev[tau] = rev[tau] - i
    g2 = Poly(rev)
    x, y = g1, g2
    while not y.is_zero():
        _, r = poly_divmod(x, y)
        x, y = y, r
    g = x
    while g.degree >= 1 and g.coeffs[0].is_zero():
        g = Poly(g.coeffs[1:])
    return {"g1": g1, "g2": g2, "gcd": g, "common_root": g.degree >= 1}


def solve_shift_coeffs(tau: int, w, pinned: dict | None = None,
                       ctx: Context | None = None) -> tuple:
    """Coefficients a_0..a_tau with sum a_j w^j = -i and sum a_j w^(-j) = i.

    Unpinned unknowns not fixed by the two equations default to 0; if that
    leaves a_tau = 0 the first free unknown that can make it nonzero is set
    to 1.
    """
    ctx = ctx or DEFAULT_CONTEXT
    pinned = dict(pinned or {})
    if not isinstance(tau, int) or tau < 1:
        raise ValueError("tau must be a natural number >= 1")
    w = Scalar.coerce(w)
    backend = w.backend
    eps = ctx.eps_zero
    if w.is_zero(0.0 if w.is_exact else eps):
        raise ZeroW("e^{ac} must be nonzero")
    for j in pinned:
        if not 0 <= j <= tau:
            raise ValueError(f"pinned index {j} outside 0..{tau}")
    pinned = {j: Scalar.coerce(v, backend) for j, v in pinned.items()}
    if tau in pinned and pinned[tau].is_zero(eps):
        raise LeadingCoefficientZero("pinned a_tau = 0")
    if _is_difference_pins(tau, pinned):
        cert = shift_system_certificate([-1, 1]) if backend == EXACT else None
        raise Infeasible(
            "the difference operator f(z+c) - f(z) would need -1 + w = -i and -1 + 1/w = i",
            "difference_operator",
            cert,
        )
    one = Scalar.one(backend)
    if w.close(one, eps) or w.close(-one, eps):
        raise Infeasible(f"e^(ac) = {w}: both equations share a left side but not -i and i",
                         "unimodular_shift")

    i = Scalar.imag_unit(backend)
    powers = [w ** j for j in range(tau + 1)]
    inv_powers = [w ** (-j) for j in range(tau + 1)]
    rhs = [-i, i]
    for j, v in pinned.items():
        rhs[0] = rhs[0] - powers[j] * v
        rhs[1] = rhs[1] - inv_powers[j] * v
    order = [j for j in [tau] + list(range(tau)) if j not in pinned]
    M = [[powers[j] for j in order], [inv_powers[j] for j in order]]
    if not order:
        if rhs[0].is_zero(eps) and rhs[1].is_zero(eps):
            return tuple(pinned[j] for j in range(tau + 1))
        cert = shift_system_certificate([pinned[j] for j in range(tau + 1)]) \
            if backend == EXACT else None
        raise Infeasible("pinned coefficients contradict the shift equations",
                         "pinned_contradiction", cert)
    pivots, R, b, consistent = _rref(M, rhs, eps)
    if not consistent:
        raise Infeasible("pinned coefficients contradict the shift equations",
                         "pinned_contradiction")
    free = [k for k in range(len(order)) if k not in pivots]

    def assemble(free_values):
        vals = dict(pinned)
        for k in free:
            vals[order[k]] = free_values.get(k, Scalar.zero(backend))
        for row, col in enumerate(pivots):
            v = b[row]
            for k in free:
                v = v - R[row][k] * vals[order[k]]
            vals[order[col]] = v
        return vals

    vals = assemble({})
    if vals[tau].is_zero(eps):
        for k in free:
            trial = assemble({k: one})
            if not trial[tau].is_zero(eps):
                vals = trial
                break
        else:
            raise LeadingCoefficientZero("the shift equations force a_tau = 0")
    coeffs = tuple(vals[j] for j in range(tau + 1))
    if tau == 1 and (coeffs[0].close(coeffs[1], eps) or coeffs[0].close(-coeffs[1], eps)):
        raise Infeasible("tau = 1 requires a_0 != +-a_1", "first_order_pair")
    return coeffs


def build_sin_family(c, tau: int, pinned: dict | None = None, ctx: Context | None = None,
                     verify: bool = True, points=None) -> SolutionFamily:
    """f = sin(pi z / (2c)) for sum_j a_j f(z + j c), with e^{ac} = i."""
    ctx = ctx or DEFAULT_CONTEXT
    c = Scalar.coerce(c)
    backend = c.backend
    if c.is_zero(0.0):
        raise DegenerateParameters("c must be nonzero")
    i = Scalar.imag_unit(backend)
    a = i * Scalar.pi(backend) / (c * 2)
    w = i
    ctx = _ensure_exponential(ctx, a * c, w)
    if backend == FLOAT and not ctx.exp(a * c).close(w, ctx.eps_zero):
        raise DegenerateParameters("e^(ac) must equal i")
    coeffs = solve_shift_coeffs(tau, w, pinned, ctx)
    zero = Scalar.zero(backend)
    even = sum((coeffs[j] * (1 if (j // 2) % 2 == 0 else -1) for j in range(0, tau + 1, 2)), zero)
    odd = sum((coeffs[j] * (1 if ((j - 1) // 2) % 2 == 0 else -1)
               for j in range(1, tau + 1, 2)), zero)
    form = CoshForm(a, zero, Poly([Scalar.one(backend)]), Poly([Scalar.one(backend)]), eb=-i)
    op = LinearShift(c, coeffs)
    family = SolutionFamily(
        f=form,
        op=op,
        rhs=ExpPoly.constant(Scalar.one(backend)),
        side_conditions=[
            ("shift_equation", sum((a_j * w ** j for j, a_j in enumerate(coeffs)), zero) + i),
            ("conjugate_shift_equation",
             sum((a_j * w ** (-j) for j, a_j in enumerate(coeffs)), zero) - i),
            ("even_alternating_sum", even),
            ("odd_alternating_sum", odd + 1),
        ],
        exclusions_checked=[("w_not_plus_minus_one", True), ("a_tau_nonzero", True)],
        ctx=ctx,
        params={"coeffs": coeffs, "w": w, "a": a},
    )
    return _finish(family, verify, points)
