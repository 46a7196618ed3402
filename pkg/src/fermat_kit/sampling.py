"""Pointwise numeric evaluation used as an independent oracle.

Derivatives come from the closed Leibniz form
    d^k/dz^k [P(z) e^{mu z}] = sum_l C(k,l) mu^(k-l) P^(l)(z) e^{mu z}
and shifts from evaluating at z + j*c, so nothing here goes through the
symbolic shift, product or normalization code.

Two precisions: ``"extended"`` runs in mpmath at ``dps`` digits over numpy
object arrays; ``"double"`` packs coefficients and calls the compiled
kernel.
"""
from __future__ import annotations

import cmath
import contextlib
import math
from math import comb, factorial

import mpmath
import numpy as np

from . import kernels
from .errors import EvalOverflow
from .exppoly import ExpPoly, Poly
from .scalar import Scalar

EXTENDED = "extended"
DOUBLE = "double"
DEFAULT_DPS = 40


def vogel_points(n: int = 32, radius: float = 3.0) -> list:
    """Deterministic low-discrepancy points filling the disk |z| <= radius."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    return [radius * math.sqrt((k + 0.5) / n) * cmath.exp(1j * golden * k) for k in range(n)]


class Numeric:
    """Number conversion and array construction for one precision mode."""

    def __init__(self, precision: str = EXTENDED, env=None, dps: int = DEFAULT_DPS):
        if precision not in (EXTENDED, DOUBLE):
            raise ValueError(f"unknown precision {precision!r}")
        self.precision = precision
        self.env = env or {}
        self.dps = dps
        self.mp = mpmath.mp if precision == EXTENDED else None

    def scalar(self, s):
        if isinstance(s, Scalar):
            return s.to_mpc(self.env, self.mp) if self.mp else s.to_complex(self.env)
        return self.mp.mpc(s) if self.mp else complex(s)

    def points(self, zs):
        if self.mp:
            return np.array([self.mp.mpc(complex(z)) for z in zs], dtype=object)
        return np.asarray([complex(z) for z in zs], dtype=np.complex128)

    def exp(self, w):
        if self.mp:
            return np.array([self.mp.exp(x) for x in w], dtype=object)
        return np.exp(w)

    def context(self):
        """Precision scope; conversions and evaluation must run inside it."""
        return mpmath.workdps(self.dps) if self.mp else contextlib.nullcontext()

    def abs_max(self, values) -> float:
        if len(values) == 0:
            return 0.0
        if self.mp:
            return float(max(abs(v) for v in values))
        return float(np.max(np.abs(values)))


class NumericExpPoly:
    """Numeric image of an ExpPoly, evaluating f^(k) at arrays of points."""

    def __init__(self, f: ExpPoly | Poly, num: Numeric):
        if isinstance(f, Poly):
            f = ExpPoly.poly(f)
        self.num = num
        self.terms = [([num.scalar(c) for c in p.coeffs], num.scalar(mu)) for p, mu in f.terms]
        self._cache = {}

    def _derivative_terms(self, k: int):
        if k in self._cache:
            return self._cache[k]
        out = []
        for coeffs, mu in self.terms:
            deg = len(coeffs) - 1
            new = [0] * (deg + 1)
            for l in range(min(k, deg) + 1):
                w = comb(k, l) * mu ** (k - l)
                for d in range(l, deg + 1):
                    new[d - l] = new[d - l] + w * coeffs[d] * (factorial(d) // factorial(d - l))
            out.append((new, mu))
        self._cache[k] = out
        return out

    def values(self, zs, k: int = 0):
        terms = self._derivative_terms(k)
        num = self.num
        if num.mp is None:
            if not terms:
                return np.zeros(len(zs), dtype=np.complex128)
            width = max(len(c) for c, _ in terms)
            coeffs = np.zeros((len(terms), width), dtype=np.complex128)
            for t, (c, _) in enumerate(terms):
                coeffs[t, : len(c)] = c
            freqs = np.array([mu for _, mu in terms], dtype=np.complex128)
            try:
                return kernels.eval_packed(coeffs, freqs, np.ascontiguousarray(zs))
            except OverflowError as exc:
                raise EvalOverflow(str(exc)) from None
        total = np.array([num.mp.mpc(0)] * len(zs), dtype=object)
        for coeffs, mu in terms:
            acc = np.array([num.mp.mpc(0)] * len(zs), dtype=object)
            for c in reversed(coeffs):
                acc = acc * zs + c
            total = total + acc * num.exp(zs * mu)
        return total

    def __call__(self, zs, k: int = 0):
        return self.values(zs, k)
