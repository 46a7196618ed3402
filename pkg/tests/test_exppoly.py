import cmath
import math
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import _properties
from _strategies import exact_poly, gauss
from fermat_kit import (
    Context,
    ExpPoly,
    ExpTerm,
    Poly,
    Scalar,
    ep_eval,
    growth_order,
    normalize,
)
from fermat_kit.errors import BackendMismatch, EvalOverflow, NonExactExponential
from fermat_kit.exppoly import poly_derive
from fermat_kit.fixtures import cosh_form

I = Scalar.imag_unit()
PI = Scalar.atom("pi")
C = Scalar.atom("c")
E = Scalar.atom("e")


def _example_f():
    # (2 e^{3z+2} + 3 e^{-(3z+2)}) / 2
    return cosh_form(3, E ** 2, 2, 3)


def test_merge_and_drop_zero_terms():
    f = normalize([(Poly([1]), 1), (Poly([-1]), 1), (Poly([0, 2]), 0), (Poly([]), 5)])
    assert f == ExpPoly.poly([0, 2])
    g = normalize([(Poly([1]), 2), (Poly([3]), -1), (Poly([1]), 2)])
    assert g.frequencies == [Scalar.exact(-1), Scalar.exact(2)]
    assert g.coefficient(2) == Poly([2])


def test_square_of_cosh_form_against_pointwise_values():
    f = _example_f()
    sq = f ** 2
    F, S = f.to_float(), sq.to_float()
    rng = random.Random(7)
    for _ in range(20):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        direct = ((2 * cmath.exp(3 * z + 2) + 3 * cmath.exp(-(3 * z + 2))) / 2) ** 2
        assert abs(ep_eval(S, z) - direct) <= 1e-12 * max(1.0, abs(direct))
        assert abs(ep_eval(F, z) ** 2 - direct) <= 1e-12 * max(1.0, abs(direct))
    # three frequencies survive: 6, 0 and -6
    assert [mu.as_int() for mu in sq.frequencies] == [-6, 0, 6]
    assert sq.coefficient(6) == Poly([E ** 4])
    assert sq.coefficient(-6) == Poly([E ** -4 * 9 / 4])


def test_square_of_exponential_plus_z():
    u = I * PI / C
    f = ExpPoly.exp(u) + ExpPoly.z()
    expected = normalize([(Poly([1]), 2 * u), (Poly([0, 2]), u), (Poly([0, 0, 1]), 0)])
    assert f ** 2 == expected


@settings(max_examples=200, deadline=None)
@given(exact_poly(max_degree=3), gauss, st.integers(0, 4))
def test_derivative_closed_form(Q, a, k):
    f = ExpPoly.exp(a, Q)
    acc = Poly([])
    for l in range(k + 1):
        acc = acc + Poly([x * a ** (k - l) * comb(k, l) for x in poly_derive(Q, l).coeffs])
    assert f.derive(k) == (ExpPoly.exp(a, acc) if not acc.is_zero() else ExpPoly.zero())


def test_shift_by_pi_i():
    assert ExpPoly.exp(3).shift(I * PI) == -ExpPoly.exp(3)


def test_shift_of_z_times_exponential():
    u = I * PI / C
    f = ExpPoly.exp(u, Poly([0, 1]))
    assert f.shift(C) == ExpPoly.exp(u, Poly([-C, -1]))


def test_shift_needs_known_exponential():
    with pytest.raises(NonExactExponential):
        ExpPoly.exp(1).shift(C)
    ctx = Context().declare(C, 5)
    assert ExpPoly.exp(1).shift(C, ctx) == ExpPoly.exp(1, 5)


def test_float_shift_matches_evaluation():
    f = cosh_form(2.0, 1.5, 1.0, 2.0, backend="float")
    c = 0.3 - 0.7j
    g = f.shift(Scalar.float(c.real, c.imag))
    for z in (0.1 + 0.2j, -1 + 0.5j):
        assert abs(ep_eval(g, z) - ep_eval(f, z + c)) < 1e-12


def test_evaluation_of_zero_and_cosh():
    assert ep_eval(ExpPoly.zero(), 1 + 2j) == 0
    f = cosh_form(2.0, cmath.exp(3), backend="float")
    assert abs(ep_eval(f, 0) - (math.exp(3) + math.exp(-3)) / 2) < 1e-12
    assert abs(ep_eval(f, 0) - 10.0677) < 1e-4


def test_evaluation_rejects_exact_and_overflow():
    with pytest.raises(BackendMismatch):
        ep_eval(ExpPoly.exp(1), 0)
    with pytest.raises(EvalOverflow):
        ep_eval(ExpPoly.exp(1.0), 800)


def test_growth_order():
    assert growth_order(ExpPoly.poly([1, 2, 3])) == 0
    assert growth_order(ExpPoly.zero()) == 0
    assert growth_order(ExpPoly.exp(I * PI / C) + ExpPoly.z()) == 1


def test_float_frequency_merge_tolerance():
    a = ExpTerm(Poly([1.0]), Scalar.float(1.0))
    b = ExpTerm(Poly([1.0]), Scalar.float(1.0 + 1e-12))
    assert len(normalize([a, b])) == 1
    assert len(normalize([a, b], Context(merge_tol=1e-13))) == 2


def test_mixed_backends_rejected():
    with pytest.raises(BackendMismatch):
        ExpPoly.exp(1) + ExpPoly.exp(1.0)


def test_poly_shift_and_call():
    p = Poly([1, 2, 3])
    assert p.shift(1) == Poly([6, 8, 3])
    assert p(Scalar.exact(2)) == Scalar.exact(17)


_SUITE = _properties.suite(100)


@pytest.mark.parametrize("name", sorted(_SUITE))
def test_kernel_property(name):
    _SUITE[name]()
