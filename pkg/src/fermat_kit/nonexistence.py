"""Growth-threshold gate and a bounded ansatz search for f^m + q (L f)^n = p.

The gate encodes the two inequalities under which finite-order
transcendental solutions cannot exist.  The search is the computational
counterpart: it looks for exponential-polynomial solutions on a finite
frequency lattice and, when none turns up, returns a certificate describing
exactly what was searched.  A certificate is a statement about that space
only.

Both statements implicitly need L f not identically zero: for
f = e^{pi i z / c} and L f = f(z) + f(z + c) the left side collapses to f^m,
and p = f^m is then solved for every m.  The search reports such solutions
with ``shift_annihilated=True``.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import kernels
from .errors import BudgetExceeded, InvalidEquation
from .exppoly import ExpPoly, ExpTerm, Poly, normalize
from .operators import apply
from .scalar import DEFAULT_CONTEXT, EXACT, FLOAT, Context, Scalar
from .verifier import NonlinearShiftEquation, sample_residual, verify_nonlinear

GUARANTEED = "NonexistenceGuaranteed"
NOT_COVERED = "NotCovered"
ENTIRE = "entire"
MEROMORPHIC = "meromorphic"

DEFAULT_BUDGET = 10 ** 6


# -- gate -------------------------------------------------------------------------


@dataclass(frozen=True)
class GateVerdict:
    verdict: str
    rule: str | None
    threshold: int
    m: int
    n: int
    tau: int
    cls: str

    @property
    def guaranteed(self) -> bool:
        return self.verdict == GUARANTEED

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "rule": self.rule, "threshold": self.threshold,
                "m": self.m, "n": self.n, "tau": self.tau, "class": self.cls}


def gate(m: int, n: int, tau: int, cls: str, pure_shift: bool = False) -> GateVerdict:
    """Decide whether non-existence of finite-order transcendental solutions is known.

    meromorphic f: guaranteed iff m >= (tau + 1)(n + 2) + 2
    entire f:      guaranteed iff m >= n + 2

    ``pure_shift=True`` declares L f = f(z + c) (tau = 1); meromorphic f is
    then also covered from m >= n + 4, the sharper of the two rules.
    """
    for name, v in (("m", m), ("n", n), ("tau", tau)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be a natural number >= 1")
    if cls not in (ENTIRE, MEROMORPHIC):
        raise ValueError(f"class must be {ENTIRE!r} or {MEROMORPHIC!r}")
    if pure_shift and tau != 1:
        raise ValueError("pure_shift describes L f = f(z + c), which has tau = 1")
    if cls == ENTIRE:
        rule, threshold = "entire_shift_bound", n + 2
    elif pure_shift:
        rule, threshold = "meromorphic_pure_shift_bound", n + 4
    else:
        rule, threshold = "meromorphic_shift_bound", (tau + 1) * (n + 2) + 2
    if m >= threshold:
        return GateVerdict(GUARANTEED, rule, threshold, m, n, tau, cls)
    return GateVerdict(NOT_COVERED, None, threshold, m, n, tau, cls)


# -- search space ------------------------------------------------------------------


@dataclass(frozen=True)
class AnsatzSpace:
    """Frequencies allowed in f, maximal polynomial degree, maximal number of terms."""

    freq_lattice: tuple
    max_poly_degree: int = 1
    max_terms: int = 2

    def __post_init__(self):
        lattice = tuple(Scalar.coerce(mu) for mu in self.freq_lattice)
        if len({mu.backend for mu in lattice}) > 1:
            lattice = tuple(mu.to_float() if mu.is_exact else mu for mu in lattice)
        object.__setattr__(self, "freq_lattice", lattice)
        if len(set(lattice)) != len(lattice):
            raise ValueError("lattice frequencies must be distinct")
        if self.max_poly_degree < 0 or self.max_terms < 0:
            raise ValueError("degree and term bounds must be natural numbers")

    @classmethod
    def default(cls, c, radius: int = 4, max_poly_degree: int = 1, max_terms: int = 2):
        """Integer multiples j * pi i / c for |j| <= radius (0 included)."""
        c = Scalar.coerce(c)
        base = Scalar.imag_unit(c.backend) * Scalar.pi(c.backend) / c
        return cls(tuple(base * j for j in range(-radius, radius + 1)), max_poly_degree, max_terms)

    def integer_form(self, env=None):
        """(base, indices) with every frequency equal to index * base."""
        values = [mu.to_complex(env) for mu in self.freq_lattice]
        nonzero = [v for v in values if abs(v) > 1e-12]
        if not nonzero:
            return 1.0 + 0j, [0] * len(values)
        smallest = min(nonzero, key=abs)
        for q in range(1, 25):
            base = smallest / q
            ratios = [v / base for v in values]
            idx = [round(r.real) for r in ratios]
            if all(abs(r - k) < 1e-9 * max(1.0, abs(k)) for r, k in zip(ratios, idx)):
                return base, idx
        raise ValueError("lattice frequencies must be integer multiples of one base frequency")

    def to_json(self) -> dict:
        from .serialize import scalar_to_json

        return {"freq_lattice": [scalar_to_json(mu) for mu in self.freq_lattice],
                "max_poly_degree": self.max_poly_degree, "max_terms": self.max_terms}


@dataclass
class ExhaustionCertificate:
    space: AnsatzSpace
    tol: float
    starts: int
    seed: int
    supports_total: int = 0
    supports_pruned: int = 0
    supports_polynomial: int = 0
    supports_solved: int = 0
    best_residual: float = float("inf")

    def to_json(self) -> dict:
        return {
            "result": "ExhaustionCertificate",
            "space": self.space.to_json(),
            "tol": self.tol,
            "starts": self.starts,
            "seed": self.seed,
            "supports_total": self.supports_total,
            "supports_pruned": self.supports_pruned,
            "supports_polynomial": self.supports_polynomial,
            "supports_solved": self.supports_solved,
            "best_residual": None if self.best_residual == float("inf") else self.best_residual,
        }


@dataclass
class FoundSolution:
    f: ExpPoly
    support: tuple
    sample_residual: float
    exact: ExpPoly | None = None
    symbolic_pass: bool | None = None
    shift_annihilated: bool = False

    def to_json(self) -> dict:
        from .serialize import exppoly_to_json

        return {
            "f": exppoly_to_json(self.exact if self.exact is not None else self.f),
            "support": list(self.support),
            "sample_residual": self.sample_residual,
            "symbolic_pass": self.symbolic_pass,
            "shift_annihilated": self.shift_annihilated,
        }


# -- coefficient grids ------------------------------------------------------------------
#
# A grid is (array, offset): array[r, d] is the z^d coefficient at frequency
# (offset + r) * base.  Products of exponential polynomials are 2-D
# convolutions of grids.


def _conv(g1, g2):
    a, o1 = g1
    b, o2 = g2
    return kernels.conv2d(np.ascontiguousarray(a), np.ascontiguousarray(b)), o1 + o2


def _power(g, k):
    out = (np.ones((1, 1), dtype=np.complex128), 0)
    for _ in range(k):
        out = _conv(out, g)
    return out


def _to_grid(f: ExpPoly, base: complex, env) -> tuple:
    if f.is_zero():
        return np.zeros((0, 1), dtype=np.complex128), 0
    idx = []
    for p, mu in f.terms:
        r = mu.to_complex(env) / base
        k = round(r.real)
        if abs(r - k) > 1e-9 * max(1.0, abs(k)):
            raise InvalidEquation(
                f"frequency {mu} of the equation data is not on the search lattice"
            )
        idx.append(k)
    lo, hi = min(idx), max(idx)
    width = max(len(p.coeffs) for p, _ in f.terms)
    arr = np.zeros((hi - lo + 1, width), dtype=np.complex128)
    for (p, _), k in zip(f.terms, idx):
        arr[k - lo, : len(p.coeffs)] = [c.to_complex(env) for c in p.coeffs]
    return arr, lo


def _shift_matrix(s: complex, D: int) -> np.ndarray:
    """T with (T p)_i = coefficient of z^i in p(z + s)."""
    T = np.zeros((D + 1, D + 1), dtype=np.complex128)
    for d in range(D + 1):
        for i in range(d + 1):
            T[i, d] = comb(d, i) * s ** (d - i)
    return T


class _System:
    """Residual and holomorphic Jacobian of d f^m + q (L f)^n - p on one support."""

    def __init__(self, support, D, m, n, dgrid, qgrid, pgrid, shift_mats):
        self.support = list(support)
        self.lo, self.hi = min(support), max(support)
        self.D = D
        self.m, self.n = m, n
        self.d, self.q, self.p = dgrid, qgrid, pgrid
        self.mats = {s: shift_mats[s] for s in support}
        rows = self.hi - self.lo + 1
        self.shape = (rows, D + 1)
        spans = [(dgrid[1] + m * self.lo, dgrid[1] + len(dgrid[0]) - 1 + m * self.hi),
                 (qgrid[1] + n * self.lo, qgrid[1] + len(qgrid[0]) - 1 + n * self.hi)]
        if len(pgrid[0]):
            spans.append((pgrid[1], pgrid[1] + len(pgrid[0]) - 1))
        self.r_lo = min(s[0] for s in spans)
        self.r_hi = max(s[1] for s in spans)
        self.width = max(dgrid[0].shape[1] + m * D, qgrid[0].shape[1] + n * D, pgrid[0].shape[1])
        self.size = (self.r_hi - self.r_lo + 1) * self.width
        self.nvars = len(self.support) * (D + 1)

    def _frame(self):
        return np.zeros((self.r_hi - self.r_lo + 1, self.width), dtype=np.complex128)

    def _place(self, frame, arr, offset, dshift=0):
        r0 = offset - self.r_lo
        frame[r0:r0 + arr.shape[0], dshift:dshift + arr.shape[1]] += arr

    def grids(self, x):
        G = np.zeros(self.shape, dtype=np.complex128)
        LG = np.zeros(self.shape, dtype=np.complex128)
        for t, s in enumerate(self.support):
            coeffs = x[t * (self.D + 1):(t + 1) * (self.D + 1)]
            G[s - self.lo] = coeffs
            LG[s - self.lo] = self.mats[s] @ coeffs
        return (G, self.lo), (LG, self.lo)

    def residual(self, x):
        g, lg = self.grids(x)
        frame = self._frame()
        self._place(frame, *_conv(self.d, _power(g, self.m)))
        self._place(frame, *_conv(self.q, _power(lg, self.n)))
        if len(self.p[0]):
            self._place(frame, -self.p[0], self.p[1])
        return frame.ravel()

    def jacobian(self, x):
        g, lg = self.grids(x)
        U, uo = _conv(self.d, _power(g, self.m - 1))
        V, vo = _conv(self.q, _power(lg, self.n - 1))
        U = U * self.m
        V = V * self.n
        J = np.zeros((self.size, self.nvars), dtype=np.complex128)
        for t, s in enumerate(self.support):
            M = self.mats[s]
            for e in range(self.D + 1):
                frame = self._frame()
                self._place(frame, U, uo + s, e)
                for dd in range(self.D + 1):
                    if M[dd, e] != 0:
                        self._place(frame, V * M[dd, e], vo + s, dd)
                J[:, t * (self.D + 1) + e] = frame.ravel()
        return J


def _levenberg_marquardt(system: _System, x0, max_iter: int, target: float):
    x = np.array(x0, dtype=np.complex128)
    r = system.residual(x)
    cost = float(np.vdot(r, r).real)
    lam = 1e-3
    for _ in range(max_iter):
        if cost <= target * target:
            break
        J = system.jacobian(x)
        A = J.conj().T @ J
        g = J.conj().T @ r
        diag = np.maximum(np.abs(np.diag(A)), 1e-12)
        improved = False
        while lam < 1e14:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            xn = x + step
            rn = system.residual(xn)
            cn = float(np.vdot(rn, rn).real)
            if np.isfinite(cn) and cn < cost:
                improved = True
                small = np.linalg.norm(step) <= 1e-15 * (1 + np.linalg.norm(x))
                x, r, cost = xn, rn, cn
                lam = max(lam / 5, 1e-15)
                break
            lam *= 5
        if not improved or small:
            break
    return x, float(np.sqrt(cost))


def _snap(v: complex) -> complex:
    def part(t):
        if abs(t) < 1e-9:
            return 0.0
        fr = Fraction(t).limit_denominator(10 ** 4)
        return float(fr) if abs(float(fr) - t) <= 1e-9 * max(1.0, abs(t)) else t

    return complex(part(v.real), part(v.imag))


def _rational(t: float):
    fr = Fraction(t).limit_denominator(10 ** 4)
    return fr if float(fr) == t else None


def _exact_candidate(x, support, D, base_exact):
    terms = []
    for t, s in enumerate(support):
        coeffs = []
        for v in x[t * (D + 1):(t + 1) * (D + 1)]:
            re, im = _rational(v.real), _rational(v.imag)
            if re is None or im is None:
                return None
            coeffs.append(Scalar.exact(re, im))
        terms.append(ExpTerm(Poly(coeffs), base_exact * s))
    return normalize(terms)


def _float_candidate(x, support, D, base):
    terms = []
    for t, s in enumerate(support):
        coeffs = [Scalar.from_complex(v) for v in x[t * (D + 1):(t + 1) * (D + 1)]]
        terms.append(ExpTerm(Poly(coeffs), Scalar.from_complex(base * s)))
    return normalize(terms)


def _float_equation(eq: NonlinearShiftEquation, env, ctx) -> NonlinearShiftEquation:
    if eq.backend == FLOAT:
        return eq
    from .operators import LinearShift

    L = LinearShift(eq.L.c.to_float(env), tuple(a.to_float(env) for a in eq.L.coeffs))
    d = None if eq.denominator is None else eq.denominator.to_float(env, ctx)
    return NonlinearShiftEquation(eq.m, eq.n, eq.q.to_float(env, ctx), eq.p.to_float(env, ctx),
                                  L, d)


def _prunable(support, m, n, dgrid, qgrid, pgrid) -> bool:
    """Necessary top/bottom frequency balance for a support of exact extent."""
    lo, hi = min(support), max(support)
    d_lo, d_hi = dgrid[1], dgrid[1] + len(dgrid[0]) - 1
    q_lo, q_hi = qgrid[1], qgrid[1] + len(qgrid[0]) - 1
    top = [q_hi + n * hi]
    bottom = [q_lo + n * lo]
    if len(pgrid[0]):
        top.append(pgrid[1] + len(pgrid[0]) - 1)
        bottom.append(pgrid[1])
    return d_hi + m * hi > max(top) or d_lo + m * lo < min(bottom)


def count_supports(size: int, max_terms: int) -> int:
    return sum(comb(size, t) for t in range(1, min(size, max_terms) + 1))


def ansatz_search(eq: NonlinearShiftEquation, space: AnsatzSpace, tol: float = 1e-8,
                  ctx: Context | None = None, starts: int = 32, seed: int = 0,
                  max_iter: int = 200, budget: int = DEFAULT_BUDGET):
    """Search ``space`` for transcendental solutions of d f^m + q (L f)^n = p.

    Every support (set of at most ``max_terms`` lattice frequencies, not
    contained in {0}) that survives the top/bottom frequency balance is
    solved by Levenberg-Marquardt from ``starts`` seeded random starts.
    Converged candidates are snapped to nearby rationals, re-checked with the
    sampling oracle (accepted only below ``tol``) and, for exact equations
    with rational coefficients, verified symbolically.

    Returns a list of :class:`FoundSolution` (sorted canonically) or an
    :class:`ExhaustionCertificate` when the list would be empty.
    """
    ctx = ctx or DEFAULT_CONTEXT
    env = ctx.env
    cert = ExhaustionCertificate(space, tol, starts, seed)
    size = len(space.freq_lattice)
    total = count_supports(size, space.max_terms)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate supports exceed the work cap of {budget}")
    cert.supports_total = total
    if size == 0 or space.max_terms == 0:
        return cert

    base, indices = space.integer_form(env)
    feq = _float_equation(eq, env, ctx)
    dgrid = _to_grid(feq.denominator if feq.denominator is not None
                     else ExpPoly.constant(1.0), base, env)
    qgrid = _to_grid(feq.q, base, env)
    pgrid = _to_grid(feq.p, base, env)
    D = space.max_poly_degree
    c = feq.L.c.to_complex()
    coeffs = [a.to_complex() for a in feq.L.coeffs]
    mats = {}
    for s in indices:
        M = np.zeros((D + 1, D + 1), dtype=np.complex128)
        for k, a in enumerate(coeffs):
            M += a * cmath.exp(s * k * base * c) * _shift_matrix(k * c, D)
        mats[s] = M

    base_exact = None
    if eq.backend == EXACT and space.freq_lattice and space.freq_lattice[0].is_exact:
        nz = [(mu, k) for mu, k in zip(space.freq_lattice, indices) if k != 0]
        if nz:
            base_exact = nz[0][0] / nz[0][1]

    scale = 1.0 + float(np.max(np.abs(pgrid[0]))) if len(pgrid[0]) else 1.0
    found = []
    for t in range(1, min(size, space.max_terms) + 1):
        for support in itertools.combinations(sorted(indices), t):
            if all(s == 0 for s in support):
                cert.supports_polynomial += 1
                continue
            if _prunable(support, feq.m, feq.n, dgrid, qgrid, pgrid):
                cert.supports_pruned += 1
                continue
            cert.supports_solved += 1
            system = _System(support, D, feq.m, feq.n, dgrid, qgrid, pgrid, mats)
            rng = np.random.default_rng([seed, *[s + 1000 for s in support]])
            seen = []
            for _ in range(starts):
                x0 = rng.standard_normal(system.nvars) + 1j * rng.standard_normal(system.nvars)
                x, res = _levenberg_marquardt(system, x0, max_iter, 1e-13 * scale)
                cert.best_residual = min(cert.best_residual, res)
                if res > 1e-7 * scale:
                    continue
                x = np.array([_snap(v) for v in x])
                if any(np.allclose(x, y, atol=1e-7) for y in seen):
                    continue
                seen.append(x)
                cand = _check_candidate(x, support, D, base, base_exact, eq, feq, ctx, tol)
                if cand is not None and not any(_same_function(cand.f, g.f) for g in found):
                    found.append(cand)
    if not found:
        return cert
    found.sort(key=lambda s: (s.support, [t.freq.sort_key() for t in s.f.terms], str(s.f)))
    return found


def _same_function(f: ExpPoly, g: ExpPoly, atol: float = 1e-7) -> bool:
    return all(abs(c.to_complex()) < atol for p, _ in (f - g).terms for c in p.coeffs)


def _check_candidate(x, support, D, base, base_exact, eq, feq, ctx, tol):
    f = _float_candidate(x, support, D, base)
    if all(mu.is_zero(1e-12) for mu in f.frequencies):
        return None  # not transcendental after cleanup
    value = sample_residual(f, feq, ctx=ctx)
    if not value < tol:
        return None
    annihilated = apply(feq.L, f, ctx).is_zero()
    out = FoundSolution(f=f, support=tuple(support), sample_residual=value,
                        shift_annihilated=annihilated)
    if base_exact is not None:
        fe = _exact_candidate(x, support, D, base_exact)
        if fe is not None:
            out.exact = fe
            out.symbolic_pass = verify_nonlinear(fe, eq, ctx).symbolic_pass
    return out
