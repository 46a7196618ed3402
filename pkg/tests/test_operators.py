import cmath

import pytest
from hypothesis import given, settings, strategies as st

from _strategies import exact_exppoly, exact_poly, gauss
from fermat_kit import (
    Context,
    DiffDelta,
    Difference,
    ExpPoly,
    LinearShift,
    MixedDelay,
    Poly,
    Scalar,
    apply,
    delta_c,
    ep_eval,
)
from fermat_kit.errors import InvalidOperator
from fermat_kit.fixtures import cosh_form
from fermat_kit.operators import shift_amounts

I = Scalar.imag_unit()
PI = Scalar.atom("pi")
C = Scalar.atom("c")


def test_diff_delta_on_cosh_form_gives_constant():
    f = cosh_form(3, Scalar.atom("e", 2), 2, 3)
    op = DiffDelta(1, I * PI, Poly([Scalar.exact(-1) / (6 * I)]))
    g = apply(op, f)
    assert f ** 2 + g ** 2 == ExpPoly.constant(6)


@settings(max_examples=100, deadline=None)
@given(st.lists(gauss, min_size=2, max_size=5).filter(lambda a: not a[-1].is_zero()),
       st.sampled_from([1, 3, -1, 5]))
def test_linear_shift_on_exponential_plus_z(coeffs, s):
    u = s * I * PI / C
    f = ExpPoly.exp(u) + ExpPoly.z()
    alt = sum(((-1) ** j * a for j, a in enumerate(coeffs)), Scalar.exact(0))
    total = sum(coeffs, Scalar.exact(0))
    moment = sum((j * a for j, a in enumerate(coeffs)), Scalar.exact(0))
    expected = ExpPoly.exp(u, alt) + ExpPoly.poly([C * moment, total])
    assert apply(LinearShift(C, tuple(coeffs)), f) == expected


def test_delta_c_on_single_exponential():
    a = Scalar.exact(2, 1)
    ctx = Context().declare(a * C, 7)
    assert delta_c(ExpPoly.exp(a), C, ctx) == ExpPoly.exp(a, 6)
    # float cross-check against direct evaluation
    af, cf = 0.4 + 1.3j, 0.9 - 0.2j
    g = delta_c(ExpPoly.exp(Scalar.from_complex(af)), Scalar.from_complex(cf))
    for z in (0.0, 1 + 1j, -0.5 + 2j):
        direct = cmath.exp(af * (z + cf)) - cmath.exp(af * z)
        assert abs(ep_eval(g, z) - direct) < 1e-12
        assert abs(ep_eval(g, z) - (cmath.exp(af * cf) - 1) * cmath.exp(af * z)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(exact_exppoly(), exact_poly().filter(lambda p: not p.is_zero()))
def test_difference_is_p_times_unit_shift(f, P):
    c = I * PI
    lhs = apply(Difference(c, P), f)
    rhs = ExpPoly.poly(P) * apply(LinearShift(c, (-1, 1)), f)
    assert lhs == rhs


@pytest.mark.parametrize("m,n", [(0, 1), (1, 3), (2, 2), (3, 0)])
def test_mixed_delay_against_closed_form(m, n):
    a, c, A, B, Q = 1.2 - 0.4j, 0.3 + 0.8j, 2 - 1j, 0.5j, 1.5 + 0.5j
    R = Poly([0.25, -1j])
    f = ExpPoly.exp(Scalar.from_complex(a), Scalar.from_complex(Q))
    op = MixedDelay(m, n, Scalar.from_complex(c), Scalar.from_complex(A),
                    Scalar.from_complex(B), R)
    g = apply(op, f)
    for z in (0.1, -0.7 + 0.4j, 1j):
        rz = 0.25 - 1j * z
        direct = rz * (A * Q * a ** m * cmath.exp(a * (z + c)) + B * Q * a ** n * cmath.exp(a * z))
        assert abs(ep_eval(g, z) - direct) < 1e-12 * max(1, abs(direct))


def test_operators_return_canonical_forms():
    f = ExpPoly.exp(1) + ExpPoly.exp(-1)
    g = apply(LinearShift(I * PI, (1, 1)), f)
    assert g.is_zero()


@pytest.mark.parametrize("build", [
    lambda: LinearShift(1, (1,)),
    lambda: LinearShift(1, (1, 0)),
    lambda: LinearShift(0, (1, 1)),
    lambda: Difference(1, Poly([])),
    lambda: DiffDelta(0, 1, Poly([1])),
    lambda: DiffDelta(1, 1, Poly([])),
    lambda: MixedDelay(1, 1, 1, 0, 1, Poly([1])),
    lambda: MixedDelay(-1, 1, 1, 1, 1, Poly([1])),
])
def test_invalid_operators(build):
    with pytest.raises(InvalidOperator):
        build()


def test_shift_amounts():
    assert shift_amounts(LinearShift(C, (1, 2, 3))) == [0 * C, C, 2 * C]
    assert shift_amounts(DiffDelta(1, C, Poly([1]))) == [0 * C, C]
