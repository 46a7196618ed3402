"""Complex scalars with an exact and a floating backend.

The exact backend holds Gaussian rationals, optionally multiplied by
integer powers of named formal atoms (``pi``, ``e``, user symbols such as
``c``).  Plain Gaussian rationals are the common case; the atoms exist so
that quantities like ``3*pi*i`` can be used as exact keys of the declared
exponential table.  The float backend wraps a Python ``complex``.

Mixing the two backends raises :class:`BackendMismatch`.  Python ``int``
and ``Fraction`` operands are neutral and adopt the backend of the other
operand; Python ``float``/``complex`` operands are only accepted by float
scalars.
"""
from __future__ import annotations

import ast
import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational

from .errors import (
    BackendMismatch,
    DivisionByZero,
    DuplicateExponential,
    EvalOverflow,
    NonExactExponential,
    NonInvertible,
)

EXACT = "exact"
FLOAT = "float"

_F0 = Fraction(0)
_F1 = Fraction(1)

# exp() of arguments with |Re| beyond this overflows binary64
_EXP_LIMIT = 709.0


# -- Gaussian rational helpers on (re, im) pairs ---------------------------

def _gadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _gmul(x, y):
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c)


def _ginv(x):
    a, b = x
    n = a * a + b * b
    return (a / n, -b / n)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for k, e in m2:
        e2 = d.get(k, 0) + e
        if e2:
            d[k] = e2
        else:
            del d[k]
    return tuple(sorted(d.items()))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise BackendMismatch(f"{type(x).__name__} value {x!r} cannot enter the exact backend")


class Scalar:
    """Immutable complex number tagged with its backend."""

    __slots__ = ("_t", "_z")

    def __init__(self, *args, **kwargs):
        raise TypeError("use Scalar.exact, Scalar.float, Scalar.atom or Scalar.coerce")

    # -- construction -------------------------------------------------------

    @classmethod
    def _exact(cls, terms: dict) -> Scalar:
        s = object.__new__(cls)
        s._t = terms
        s._z = None
        return s

    @classmethod
    def _float(cls, z: complex) -> Scalar:
        s = object.__new__(cls)
        s._t = None
        s._z = complex(z)
        return s

    @classmethod
    def exact(cls, re=0, im=0) -> Scalar:
        re, im = _frac(re), _frac(im)
        return cls._exact({(): (re, im)} if (re or im) else {})

    @classmethod
    def float(cls, re=0.0, im=0.0) -> Scalar:
        return cls._float(complex(re, im))

    @classmethod
    def from_complex(cls, z) -> Scalar:
        return cls._float(complex(z))

    @classmethod
    def atom(cls, name: str, power: int = 1) -> Scalar:
        if not name.isidentifier():
            raise ValueError(f"bad atom name {name!r}")
        if power == 0:
            return cls.exact(1)
        return cls._exact({((name, int(power)),): (_F1, _F0)})

    @classmethod
    def one(cls, backend=EXACT) -> Scalar:
        return cls.exact(1) if backend == EXACT else cls._float(1)

    @classmethod
    def zero(cls, backend=EXACT) -> Scalar:
        return cls.exact(0) if backend == EXACT else cls._float(0)

    @classmethod
    def imag_unit(cls, backend=EXACT) -> Scalar:
        return cls.exact(0, 1) if backend == EXACT else cls._float(1j)

    @classmethod
    def pi(cls, backend=EXACT) -> Scalar:
        return cls.atom("pi") if backend == EXACT else cls._float(math.pi)

    @classmethod
    def coerce(cls, x, backend=None) -> Scalar:
        """Turn ``x`` into a Scalar of ``backend`` (None: infer from x)."""
        if isinstance(x, Scalar):
            if backend is not None and x.backend != backend:
                raise BackendMismatch(f"{x.backend} scalar used where {backend} is required")
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, (int, Rational)):
            if backend == FLOAT:
                return cls._float(complex(float(Fraction(x))))
            return cls.exact(x)
        if isinstance(x, (float, complex)):
            if backend == EXACT:
                raise BackendMismatch(f"float value {x!r} cannot enter the exact backend")
            return cls._float(x)
        if isinstance(x, str):
            return parse_scalar(x, backend or EXACT)
        raise TypeError(f"cannot make a scalar from {type(x).__name__}")

    # -- inspection ---------------------------------------------------------

    @property
    def backend(self) -> str:
        return EXACT if self._t is not None else FLOAT

    @property
    def is_exact(self) -> bool:
        return self._t is not None

    @property
    def is_rational(self) -> bool:
        """True for exact scalars without atoms (plain Gaussian rationals)."""
        return self._t is not None and all(m == () for m in self._t)

    @property
    def terms(self) -> dict:
        if self._t is None:
            raise BackendMismatch("float scalars have no exact terms")
        return dict(self._t)

    @property
    def atoms(self) -> frozenset:
        if self._t is None:
            return frozenset()
        return frozenset(name for m in self._t for name, _ in m)

    @property
    def re(self):
        if self._t is None:
            return self._z.real
        if not self.is_rational:
            raise ValueError(f"{self} has no rational real part")
        return self._t.get((), (_F0, _F0))[0]

    @property
    def im(self):
        if self._t is None:
            return self._z.imag
        if not self.is_rational:
            raise ValueError(f"{self} has no rational imaginary part")
        return self._t.get((), (_F0, _F0))[1]

    def as_int(self):
        """The value as a Python int if it is an exact real integer, else None."""
        if self._t is None:
            return None
        if not self._t:
            return 0
        if len(self._t) != 1 or () not in self._t:
            return None
        re, im = self._t[()]
        if im or re.denominator != 1:
            return None
        return int(re)

    def is_zero(self, eps: float = 1e-9) -> bool:
        if self._t is not None:
            return not self._t
        return abs(self._z) <= eps

    def close(self, other, eps: float = 1e-9) -> bool:
        return (self - other).is_zero(eps)

    def is_monomial(self) -> bool:
        return self._t is not None and len(self._t) == 1

    # -- arithmetic -----------------------------------------------------------

    def _other(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if (other._t is None) != (self._t is None):
                raise BackendMismatch(f"cannot combine {self.backend} and {other.backend} scalars")
            return other
        return Scalar.coerce(other, self.backend)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError as exc:
            if isinstance(exc, BackendMismatch):
                raise
            return NotImplemented
        if self._t is None:
            return Scalar._float(self._z + o._z)
        if not o._t:
            return self
        if not self._t:
            return o
        out = dict(self._t)
        for m, c in o._t.items():
            if m in out:
                s = _gadd(out[m], c)
                if s[0] or s[1]:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return Scalar._exact(out)

    __radd__ = __add__

    def __neg__(self):
        if self._t is None:
            return Scalar._float(-self._z)
        return Scalar._exact({m: (-a, -b) for m, (a, b) in self._t.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError as exc:
            if isinstance(exc, BackendMismatch):
                raise
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError as exc:
            if isinstance(exc, BackendMismatch):
                raise
            return NotImplemented
        if self._t is None:
            return Scalar._float(self._z * o._z)
        if not self._t or not o._t:
            return Scalar._exact({})
        out = {}
        for m1, c1 in self._t.items():
            for m2, c2 in o._t.items():
                m = _mono_mul(m1, m2)
                p = _gmul(c1, c2)
                if m in out:
                    p = _gadd(out[m], p)
                    if p[0] or p[1]:
                        out[m] = p
                    else:
                        del out[m]
                else:
                    out[m] = p
        return Scalar._exact(out)

    __rmul__ = __mul__

    def inv(self, eps: float = 1e-9) -> Scalar:
        if self.is_zero(eps):
            raise DivisionByZero(f"inverse of zero ({self})")
        if self._t is None:
            return Scalar._float(1 / self._z)
        if len(self._t) != 1:
            raise NonInvertible(f"{self} is a sum of atom terms; exact inverse unavailable")
        (m, c), = self._t.items()
        return Scalar._exact({tuple((k, -e) for k, e in m): _ginv(c)})

    def __truediv__(self, other):
        try:
            o = self._other(other)
        except TypeError as exc:
            if isinstance(exc, BackendMismatch):
                raise
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = Scalar.one(self.backend)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> Scalar:
        if self._t is None:
            return Scalar._float(self._z.conjugate())
        if not self.is_rational:
            raise ValueError("conjugate is only defined for atom-free scalars")
        return Scalar._exact({m: (a, -b) for m, (a, b) in self._t.items()})

    def sqrt_exact(self):
        """Exact square root of an atom-free Gaussian rational, or None."""
        if not self.is_rational:
            return None
        a, b = self.re, self.im
        if not a and not b:
            return Scalar.exact(0)
        mod = _rational_sqrt(a * a + b * b)
        if mod is None:
            return None
        x = _rational_sqrt((mod + a) / 2)
        y = _rational_sqrt((mod - a) / 2)
        if x is None or y is None:
            return None
        if b < 0:
            y = -y
        return Scalar.exact(x, y)

    def sqrt(self) -> Scalar:
        if self._t is None:
            return Scalar._float(cmath.sqrt(self._z))
        r = self.sqrt_exact()
        if r is None:
            raise NonInvertible(f"sqrt({self}) is not a Gaussian rational; use the float backend")
        return r

    # -- comparison / ordering ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if (other._t is None) != (self._t is None):
                return False
            return self._t == other._t if self._t is not None else self._z == other._z
        try:
            return self == Scalar.coerce(other, self.backend)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._t is None:
            return hash(self._z)
        return hash(frozenset(self._t.items()))

    def sort_key(self):
        """Lexicographic (re, im) for numbers; atom-bearing values after them."""
        if self._t is None:
            return (0, self._z.real, self._z.imag, ())
        if self.is_rational:
            return (0, self.re, self.im, ())
        return (1, 0, 0, tuple(sorted((m, c) for m, c in self._t.items())))

    # -- numeric evaluation ---------------------------------------------------

    def to_complex(self, env=None) -> complex:
        if self._t is None:
            return self._z
        return complex(_evaluate(self, env, mp=None))

    def to_mpc(self, env=None, mp=None):
        import mpmath
        mp = mp or mpmath.mp
        if self._t is None:
            return mp.mpc(self._z)
        return _evaluate(self, env, mp=mp)

    def to_float(self, env=None) -> Scalar:
        return Scalar._float(self.to_complex(env))

    # -- display ----------------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self.backend}, {self})"

    def __str__(self):
        if self._t is None:
            return repr(self._z)
        if not self._t:
            return "0"
        parts = []
        for m, (a, b) in sorted(self._t.items()):
            coef = _gauss_str(a, b)
            if not m:
                parts.append(coef)
                continue
            mono = "*".join(k if e == 1 else f"{k}^{e}" for k, e in m)
            if coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({coef})*{mono}")
        return " + ".join(parts)


def _gauss_str(a: Fraction, b: Fraction) -> str:
    if not b:
        return str(a)
    if not a:
        return f"{b}i" if b != 1 else "i"
    return f"{a}{'+' if b > 0 else '-'}{abs(b)}i"


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


_DEFAULT_ATOMS = {"pi": math.pi, "e": math.e}


def _evaluate(s: Scalar, env, mp):
    env = dict(env or {})
    total = mp.mpc(0) if mp else 0j
    cache = {}
    for m, (a, b) in s._t.items():
        if mp:
            term = mp.mpc(mp.mpf(a.numerator) / a.denominator, mp.mpf(b.numerator) / b.denominator)
        else:
            term = complex(a, b)
        for name, e in m:
            if name not in cache:
                cache[name] = _atom_value(name, env, mp)
            term *= cache[name] ** e
        total += term
    return total


def _atom_value(name, env, mp, _depth=0):
    if _depth > 16:
        raise ValueError(f"atom definitions too deep at {name!r}")
    if name in env:
        v = env[name]
        if isinstance(v, Scalar):
            if v.is_exact:
                inner = {k: val for k, val in env.items() if k != name}
                return _evaluate(v, inner, mp)
            v = v.to_complex()
        return mp.mpc(v) if mp else complex(v)
    if name == "pi":
        return mp.mpc(mp.pi) if mp else complex(math.pi)
    if name == "e":
        return mp.mpc(mp.e) if mp else complex(math.e)
    raise ValueError(f"no numeric value for atom {name!r}; add it to the context atoms")


# -- context --------------------------------------------------------------------


def _integer_ratio(x: Scalar, k: Scalar):
    """r with x == r*k for a real integer r, else None (exact scalars)."""
    if not k._t or not x._t:
        return None
    m0, q0 = next(iter(k._t.items()))
    xm = x._t.get(m0)
    if xm is None:
        return None
    re, im = _gmul(xm, _ginv(q0))
    if im or re.denominator != 1:
        return None
    r = int(re)
    if k * r != x:
        return None
    return r


@dataclass(frozen=True)
class Context:
    """Per-computation tolerances and the exact exponential table.

    ``eps_zero`` is the float zero-test, ``merge_tol`` the float
    frequency-merge tolerance.  ``exponentials`` holds declared pairs
    (x, e^x) consulted by exact shifts; ``atoms`` gives numeric values for
    formal atoms when exact data is sampled numerically.
    """

    eps_zero: float = 1e-9
    merge_tol: float = 1e-9
    exponentials: tuple = field(
        default_factory=lambda: ((Scalar.exact(0, 1) * Scalar.atom("pi"), Scalar.exact(-1)),)
    )
    atoms: tuple = ()

    @property
    def env(self) -> dict:
        # pi and e are resolved by the evaluator at the working precision
        return dict(self.atoms)

    def with_eps(self, eps_zero=None, merge_tol=None) -> Context:
        return replace(
            self,
            eps_zero=self.eps_zero if eps_zero is None else float(eps_zero),
            merge_tol=self.merge_tol if merge_tol is None else float(merge_tol),
        )

    def with_atoms(self, **values) -> Context:
        d = dict(self.atoms)
        d.update(values)
        return replace(self, atoms=tuple(sorted(d.items())))

    def declare(self, arg, value) -> Context:
        """Register e^arg = value; inconsistent declarations raise."""
        arg = Scalar.coerce(arg, EXACT)
        value = Scalar.coerce(value, EXACT)
        if value.is_zero():
            raise DuplicateExponential(f"e^({arg}) cannot be zero")
        known = self._lookup(arg)
        if known is not None:
            if known != value:
                raise DuplicateExponential(
                    f"e^({arg}) declared as {value} but already known as {known}"
                )
            return self
        for k, v in self.exponentials:
            r = _integer_ratio(k, arg)
            if r is not None and _safe_pow(value, r) != v:
                raise DuplicateExponential(
                    f"e^({arg}) = {value} contradicts declared e^({k}) = {v}"
                )
        return replace(self, exponentials=self.exponentials + ((arg, value),))

    def _lookup(self, x: Scalar):
        if not x._t:
            return Scalar.exact(1)
        for k, v in self.exponentials:
            r = _integer_ratio(x, k)
            if r is not None:
                try:
                    return v ** r
                except NonInvertible:
                    continue
        n = x.as_int()
        if n is not None:
            return Scalar.atom("e", n)
        const = x._t.get(())
        if const is not None and not const[1] and const[0].denominator == 1:
            n = int(const[0])
            rest = x - n
            inner = self._lookup(rest)
            if inner is not None:
                return inner * Scalar.atom("e", n)
        return None

    def exp(self, x) -> Scalar:
        """e^x: exact via the declared table, float via cmath."""
        if isinstance(x, Scalar) and not x.is_exact or isinstance(x, (float, complex)):
            z = complex(x.to_complex() if isinstance(x, Scalar) else x)
            if abs(z.real) > _EXP_LIMIT:
                raise EvalOverflow(f"exp({z}) overflows binary64")
            return Scalar.from_complex(cmath.exp(z))
        x = Scalar.coerce(x, EXACT)
        v = self._lookup(x)
        if v is None:
            raise NonExactExponential(x)
        return v


def _safe_pow(v: Scalar, r: int):
    try:
        return v ** r
    except NonInvertible:
        return None


DEFAULT_CONTEXT = Context()


# -- expression strings -------------------------------------------------------------


def parse_scalar(text: str, backend: str = EXACT, env=None) -> Scalar:
    """Parse a small arithmetic expression such as ``"-1/(6*i)"`` or ``"3*pi*i/c"``.

    Names: ``i`` (imaginary unit), ``pi``, ``e`` and any other identifier as a
    formal atom.  In the float backend atoms are replaced by numeric values
    taken from ``env`` (``pi`` and ``e`` are built in).
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse scalar expression {text!r}: {exc.msg}") from None
    env = dict(_DEFAULT_ATOMS) | dict(env or {})

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) \
                and not isinstance(node.value, bool):
            v = node.value
            if backend == EXACT:
                if isinstance(v, complex):
                    return Scalar.exact(Fraction(str(v.real)), Fraction(str(v.imag)))
                return Scalar.exact(Fraction(str(v)) if isinstance(v, float) else v)
            return Scalar.coerce(complex(v), FLOAT)
        if isinstance(node, ast.Name):
            if node.id in ("i", "I", "j"):
                return Scalar.imag_unit(backend)
            if backend == EXACT:
                return Scalar.atom(node.id)
            return Scalar.coerce(complex(_atom_value(node.id, env, None)), FLOAT)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = ev(node.left)
            right = ev(node.right)
            if isinstance(node.op, ast.Pow):
                n = _int_exponent(right)
                if n is None:
                    raise ValueError(f"only integer powers are supported in {text!r}")
                return left ** n
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        raise ValueError(f"unsupported syntax in scalar expression {text!r}")

    return ev(tree)


def _int_exponent(s: Scalar):
    if s.is_exact:
        return s.as_int()
    z = s.to_complex()
    if z.imag == 0 and z.real == int(z.real):
        return int(z.real)
    return None
