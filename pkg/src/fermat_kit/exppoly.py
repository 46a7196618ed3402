"""Exponential polynomials  sum_j P_j(z) e^{mu_j z}  in canonical form.

Canonical form: pairwise distinct frequencies, no zero polynomials, terms
sorted by frequency.  An ExpPoly is identically zero iff it has no terms,
which is what lets residuals be tested for zero term by term.
"""
from __future__ import annotations

import cmath
from math import comb
from typing import Iterable, NamedTuple

from .errors import BackendMismatch, EvalOverflow
from .scalar import DEFAULT_CONTEXT, EXACT, FLOAT, Context, Scalar

_EXP_LIMIT = 709.0


def _backend_of(values) -> str | None:
    backend = None
    for v in values:
        if isinstance(v, Scalar):
            b = v.backend
        elif isinstance(v, (float, complex)):
            b = FLOAT
        else:
            continue
        if backend is None:
            backend = b
        elif backend != b:
            raise BackendMismatch("exact and float coefficients mixed")
    return backend


def _join(b1, b2):
    if b1 is None:
        return b2
    if b2 is None or b1 == b2:
        return b1
    raise BackendMismatch(f"cannot combine {b1} and {b2} operands")


class Poly:
    """Polynomial in z with Scalar coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (), ctx: Context | None = None, backend=None):
        coeffs = list(coeffs)
        backend = _join(backend, _backend_of(coeffs))
        cs = [Scalar.coerce(c, backend or EXACT) for c in coeffs]
        eps = (ctx or DEFAULT_CONTEXT).eps_zero
        while cs and cs[-1].is_zero(eps):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs) -> Poly:
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def z(cls, backend=EXACT) -> Poly:
        return cls._raw((Scalar.zero(backend), Scalar.one(backend)))

    @classmethod
    def const(cls, c, backend=None) -> Poly:
        return cls([c], backend=backend)

    @property
    def backend(self):
        return self.coeffs[0].backend if self.coeffs else None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Scalar:
        return self.coeffs[-1]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_exact and c.is_zero():
                continue
            zk = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            parts.append(f"({c})" + (f"*{zk}" if zk else ""))
        return " + ".join(parts) or "0"

    def __add__(self, other):
        return poly_add(self, _as_poly(other, self.backend))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(-c for c in self.coeffs)

    def __sub__(self, other):
        return poly_add(self, -_as_poly(other, self.backend))

    def __rsub__(self, other):
        return poly_add(-self, _as_poly(other, self.backend))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __call__(self, z):
        return poly_eval(self, z)

    def derive(self, k: int = 1) -> Poly:
        return poly_derive(self, k)

    def shift(self, c) -> Poly:
        return poly_shift(self, c)

    def to_float(self, env=None) -> Poly:
        return Poly._raw(c.to_float(env) for c in self.coeffs)


def _as_poly(x, backend) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x], backend=backend)


def _trim(cs: list, ctx: Context | None) -> Poly:
    eps = (ctx or DEFAULT_CONTEXT).eps_zero
    while cs and cs[-1].is_zero(eps):
        cs.pop()
    return Poly._raw(cs)


def poly_add(p: Poly, q: Poly, ctx=None) -> Poly:
    _join(p.backend, q.backend)
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    cs = list(a)
    for k, c in enumerate(b):
        cs[k] = cs[k] + c
    return _trim(cs, ctx)


def poly_mul(p: Poly, q: Poly, ctx=None) -> Poly:
    _join(p.backend, q.backend)
    if not p.coeffs or not q.coeffs:
        return Poly._raw(())
    cs = [None] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            t = a * b
            cs[i + j] = t if cs[i + j] is None else cs[i + j] + t
    return _trim(cs, ctx)


def poly_scale(p: Poly, s, ctx=None) -> Poly:
    if not p.coeffs:
        return p
    s = Scalar.coerce(s, p.backend)
    return _trim([c * s for c in p.coeffs], ctx)


def poly_derive(p: Poly, k: int = 1) -> Poly:
    cs = list(p.coeffs)
    for _ in range(k):
        cs = [c * j for j, c in enumerate(cs)][1:]
    return Poly._raw(cs)


def poly_shift(p: Poly, c, ctx=None) -> Poly:
    """P(z + c) by Horner's scheme."""
    if len(p.coeffs) <= 1:
        return p
    c = Scalar.coerce(c, p.backend)
    out: list = []
    for a in reversed(p.coeffs):
        # out <- out*(z + c) + a
        nxt = [None] * (len(out) + 1)
        for k, v in enumerate(out):
            nxt[k + 1] = v if nxt[k + 1] is None else nxt[k + 1] + v
            cv = v * c
            nxt[k] = cv if nxt[k] is None else nxt[k] + cv
        nxt[0] = a if nxt[0] is None else nxt[0] + a
        out = nxt
    return _trim(out, ctx)


def poly_eval(p: Poly, z):
    """Evaluate at a Scalar (same backend) or a Python number (float coefficients)."""
    if isinstance(z, Scalar):
        acc = Scalar.zero(z.backend)
        for c in reversed(p.coeffs):
            acc = acc * z + c
        return acc
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c.to_complex()
    return acc


def poly_divmod(p: Poly, d: Poly, ctx=None):
    """Euclidean division p = q*d + r with deg r < deg d."""
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    _join(p.backend, d.backend)
    rem = list(p.coeffs)
    inv_lead = d.lead.inv()
    nd = len(d.coeffs)
    if len(rem) < nd:
        return Poly._raw(()), _trim(rem, ctx)
    quot = [None] * (len(rem) - nd + 1)
    eps = (ctx or DEFAULT_CONTEXT).eps_zero
    for k in range(len(rem) - nd, -1, -1):
        t = rem[k + nd - 1] * inv_lead
        quot[k] = t
        for j, dc in enumerate(d.coeffs):
            rem[k + j] = rem[k + j] - t * dc
        rem[k + nd - 1] = Scalar.zero(t.backend)
    rem = rem[: nd - 1]
    while rem and rem[-1].is_zero(eps):
        rem.pop()
    return _trim(quot, ctx), Poly._raw(rem)


# -- exponential polynomials ---------------------------------------------------------


class ExpTerm(NamedTuple):
    poly: Poly
    freq: Scalar


class ExpPoly:
    """Canonical exponential polynomial.  Build with :func:`normalize` or the helpers."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = (), ctx: Context | None = None):
        self.terms = normalize(terms, ctx).terms

    @classmethod
    def _canonical(cls, terms) -> ExpPoly:
        f = object.__new__(cls)
        f.terms = tuple(terms)
        return f

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls) -> ExpPoly:
        return cls._canonical(())

    @classmethod
    def constant(cls, c, backend=None) -> ExpPoly:
        p = Poly([c], backend=backend)
        return cls._canonical(()) if p.is_zero() else cls._canonical(
            (ExpTerm(p, Scalar.zero(p.backend)),)
        )

    @classmethod
    def poly(cls, coeffs, backend=None) -> ExpPoly:
        p = coeffs if isinstance(coeffs, Poly) else Poly(coeffs, backend=backend)
        return cls._canonical(()) if p.is_zero() else cls._canonical(
            (ExpTerm(p, Scalar.zero(p.backend)),)
        )

    @classmethod
    def z(cls, backend=EXACT) -> ExpPoly:
        return cls.poly(Poly.z(backend))

    @classmethod
    def exp(cls, freq, coeff=1, backend=None) -> ExpPoly:
        """coeff * e^{freq z}; coeff may be a Poly."""
        if backend is None:
            backend = _backend_of([freq, coeff]) or EXACT
        if isinstance(coeff, Poly):
            p = coeff
        else:
            p = Poly([coeff], backend=backend)
        return normalize([ExpTerm(p, Scalar.coerce(freq, backend))])

    # -- inspection -----------------------------------------------------------

    @property
    def backend(self):
        return self.terms[0].freq.backend if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def frequencies(self) -> list:
        return [t.freq for t in self.terms]

    def coefficient(self, freq) -> Poly:
        for t in self.terms:
            if t.freq == freq:
                return t.poly
        return Poly._raw(())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"ExpPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for p, mu in self.terms:
            if mu.is_exact and mu.is_zero():
                out.append(f"[{p}]")
            else:
                out.append(f"[{p}]*exp(({mu})*z)")
        return " + ".join(out)

    # -- operators -------------------------------------------------------------

    def __add__(self, other):
        return ep_add(self, _as_exppoly(other, self.backend))

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._canonical(ExpTerm(-p, mu) for p, mu in self.terms)

    def __sub__(self, other):
        return ep_add(self, -_as_exppoly(other, self.backend))

    def __rsub__(self, other):
        return ep_add(-self, _as_exppoly(other, self.backend))

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ep_mul(self, other)
        if isinstance(other, Poly):
            return ep_mul(self, ExpPoly.poly(other))
        return ep_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        return ep_pow(self, n)

    def __call__(self, z):
        return ep_eval(self, z)

    def derive(self, k: int = 1) -> ExpPoly:
        return ep_derive(self, k)

    def shift(self, c, ctx=None) -> ExpPoly:
        return ep_shift(self, c, ctx)

    def to_float(self, env=None, ctx=None) -> ExpPoly:
        """Numeric image of an exact ExpPoly (atoms resolved through ``env``)."""
        if self.backend != EXACT:
            return self
        if env is None:
            env = (ctx or DEFAULT_CONTEXT).env
        return normalize(
            [ExpTerm(p.to_float(env), mu.to_float(env)) for p, mu in self.terms], ctx
        )


def _as_exppoly(x, backend) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, Poly):
        return ExpPoly.poly(x)
    return ExpPoly.constant(x, backend=backend)


def normalize(terms: Iterable, ctx: Context | None = None) -> ExpPoly:
    """Canonicalize a list of (poly, freq) pairs.

    Equal frequencies are merged (within ``ctx.merge_tol`` in float mode),
    zero polynomials dropped and the result sorted by frequency.
    """
    ctx = ctx or DEFAULT_CONTEXT
    items = []
    backend = None
    for t in terms:
        p, mu = t
        if not isinstance(p, Poly):
            p = Poly(p, ctx)
        backend = _join(backend, p.backend)
        if isinstance(mu, Scalar):
            backend = _join(backend, mu.backend)
        items.append((p, mu))
    backend = backend or EXACT
    merged: list = []
    if backend == EXACT:
        index = {}
        for p, mu in items:
            mu = Scalar.coerce(mu, EXACT)
            if mu in index:
                k = index[mu]
                merged[k][0] = poly_add(merged[k][0], p, ctx)
            else:
                index[mu] = len(merged)
                merged.append([p, mu])
    else:
        tol = ctx.merge_tol
        items = [(p, Scalar.coerce(mu, FLOAT)) for p, mu in items]
        items.sort(key=lambda it: it[1].sort_key())
        for p, mu in items:
            z = mu.to_complex()
            for slot in merged:
                if abs(slot[1].to_complex() - z) < tol:
                    slot[0] = poly_add(slot[0], p, ctx)
                    break
            else:
                merged.append([p, mu])
    out = [ExpTerm(p, mu) for p, mu in merged if not p.is_zero()]
    out.sort(key=lambda t: t.freq.sort_key())
    return ExpPoly._canonical(out)


def ep_add(f: ExpPoly, g: ExpPoly, ctx=None) -> ExpPoly:
    if not f.terms:
        return g
    if not g.terms:
        return f
    _join(f.backend, g.backend)
    return normalize(list(f.terms) + list(g.terms), ctx)


def ep_sub(f: ExpPoly, g: ExpPoly, ctx=None) -> ExpPoly:
    return ep_add(f, -g, ctx)


def ep_scale(f: ExpPoly, s, ctx=None) -> ExpPoly:
    if not f.terms:
        return f
    s = Scalar.coerce(s, f.backend)
    return normalize([(poly_scale(p, s, ctx), mu) for p, mu in f.terms], ctx)


def ep_mul(f: ExpPoly, g: ExpPoly, ctx=None) -> ExpPoly:
    if not f.terms or not g.terms:
        return ExpPoly.zero()
    _join(f.backend, g.backend)
    return normalize(
        [(poly_mul(p, q, ctx), mu + nu) for p, mu in f.terms for q, nu in g.terms], ctx
    )


def ep_pow(f: ExpPoly, n: int, ctx=None) -> ExpPoly:
    """f**n by repeated squaring, normalizing after every product."""
    if not isinstance(n, int) or n < 0:
        raise ValueError("ep_pow needs a natural exponent")
    result = ExpPoly.constant(1, backend=f.backend or EXACT)
    base = f
    while n:
        if n & 1:
            result = ep_mul(result, base, ctx)
        n >>= 1
        if n:
            base = ep_mul(base, base, ctx)
    return result


def ep_derive(f: ExpPoly, k: int = 1, ctx=None) -> ExpPoly:
    """k-th derivative; one step maps (P, mu) to (P' + mu*P, mu)."""
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    terms = list(f.terms)
    for _ in range(k):
        terms = [(poly_add(poly_derive(p), poly_scale(p, mu, ctx), ctx), mu) for p, mu in terms]
    return normalize(terms, ctx)


def ep_shift(f: ExpPoly, c, ctx: Context | None = None) -> ExpPoly:
    """f(z + c): each term (P, mu) becomes (e^{mu c} P(z + c), mu)."""
    ctx = ctx or DEFAULT_CONTEXT
    if not f.terms:
        return f
    c = Scalar.coerce(c, f.backend)
    out = []
    for p, mu in f.terms:
        factor = ctx.exp(mu * c)
        out.append((poly_scale(poly_shift(p, c, ctx), factor, ctx), mu))
    return normalize(out, ctx)


def ep_eval(f: ExpPoly, z, ctx=None) -> complex:
    """Direct evaluation of a float ExpPoly at z."""
    if f.backend == EXACT:
        raise BackendMismatch("ep_eval needs a float ExpPoly; convert with to_float(env)")
    z = complex(z.to_complex() if isinstance(z, Scalar) else z)
    total = 0j
    for p, mu in f.terms:
        w = mu.to_complex() * z
        if abs(w.real) > _EXP_LIMIT:
            raise EvalOverflow(f"|Re(mu z)| = {abs(w.real):.1f} overflows at z={z}")
        total += poly_eval(p, z) * cmath.exp(w)
    return total


def growth_order(f: ExpPoly) -> int:
    """0 for polynomials, 1 once any nonzero frequency is present."""
    for _, mu in f.terms:
        if not mu.is_zero(0.0):
            return 1
    return 0


def derivative_coefficients(p: Poly, mu: Scalar, k: int) -> Poly:
    """Closed form of the k-th derivative of P(z) e^{mu z}, divided by e^{mu z}:
    sum_l C(k, l) mu^{k-l} P^{(l)}(z)."""
    acc = Poly._raw(())
    for l in range(k + 1):
        dl = poly_derive(p, l)
        if dl.is_zero():
            break
        acc = poly_add(acc, poly_scale(dl, mu ** (k - l) * comb(k, l)))
    return acc
