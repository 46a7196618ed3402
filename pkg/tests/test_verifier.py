import json
import random

import pytest

from fermat_kit import (
    Context,
    DiffDelta,
    ExpPoly,
    FermatEquation,
    LinearShift,
    MixedDelay,
    NonlinearShiftEquation,
    Poly,
    Scalar,
    apply,
    fermat_residual,
    sample_residual,
    verify_factorized,
    verify_fermat,
    verify_nonlinear,
)
from fermat_kit import fixtures
from fermat_kit.errors import BackendMismatch, InvalidEquation, NonExactExponential
from fermat_kit.fixtures import cosh_form
from fermat_kit.sampling import vogel_points

I = Scalar.imag_unit()
PI = Scalar.atom("pi")
C = Scalar.atom("c")


def _cosh_diff_delta(scale=1):
    f = cosh_form(3, Scalar.atom("e", 2), 2, 3)
    R = Scalar.exact(-1) / (6 * I) * scale
    return f, FermatEquation(DiffDelta(1, I * PI, Poly([R])), 6)


@pytest.mark.parametrize("fx", fixtures.CORPUS, ids=lambda fx: fx.name)
def test_worked_example_verifies(fx):
    result = fixtures.run_fixture(fx)
    assert result.symbolic_pass
    assert result.sample_max_abs < 1e-8
    if result.factorized is not None:
        assert result.factorized


def test_cosh_diff_delta_residual_is_termless():
    f, eq = _cosh_diff_delta()
    assert fermat_residual(f, eq).terms == ()
    report = verify_fermat(f, eq)
    assert report.passed and report.growth_order == 1
    doc = report.to_json()
    assert doc["symbolic_pass"] is True and doc["residual"] == []
    json.dumps(doc)


def test_perturbed_coefficient_fails_both_routes():
    f, eq = _cosh_diff_delta(Scalar.exact(101, 0) / 100)
    report = verify_fermat(f, eq)
    assert not report.symbolic_pass
    assert report.sample_max_abs > 1e-3
    assert not verify_factorized(f, eq)
    # the surviving frequencies are the diagnostics
    assert {mu.as_int() for mu in report.residual.frequencies} == {-6, 0, 6}


def test_zero_candidate():
    _, eq = _cosh_diff_delta()
    report = verify_fermat(ExpPoly.zero(), eq)
    assert not report.symbolic_pass
    assert report.residual == ExpPoly.constant(-6)
    assert abs(report.sample_max_abs - 6) < 1e-12
    L = LinearShift(1, (1, 1))
    nl = NonlinearShiftEquation(2, 1, 1, 0, L)
    assert verify_nonlinear(ExpPoly.zero(), nl).passed


def test_rhs_and_q_must_be_nonzero():
    with pytest.raises(InvalidEquation):
        FermatEquation(DiffDelta(1, 1, Poly([1])), 0)
    with pytest.raises(InvalidEquation):
        NonlinearShiftEquation(1, 1, 0, 1, LinearShift(1, (1, 1)))
    with pytest.raises(InvalidEquation):
        NonlinearShiftEquation(0, 1, 1, 1, LinearShift(1, (1, 1)))


def test_backend_mismatch_between_candidate_and_equation():
    _, eq = _cosh_diff_delta()
    with pytest.raises(BackendMismatch):
        verify_fermat(ExpPoly.exp(1.0), eq)


def test_undeclared_exponential_carries_hint():
    eq = FermatEquation(DiffDelta(1, C, Poly([1])), 1)
    with pytest.raises(NonExactExponential, match="declare"):
        verify_fermat(ExpPoly.exp(1), eq, Context().with_atoms(c=1))


def test_too_few_points():
    f, eq = _cosh_diff_delta()
    with pytest.raises(ValueError):
        verify_fermat(f, eq, points=[0, 1, 2])


def test_double_precision_path():
    f, eq, ctx = fixtures.get("mixed_odd_even").build()
    small = [0.5 * z for z in vogel_points(32, 1.0)]
    assert sample_residual(f, eq, small, ctx, precision="double") < 1e-8


def test_exp_plus_z_with_coefficient_conditions():
    # a0 - a1 + a2 - a3 = 2, a0 + a1 + a2 + a3 = 1, a1 + 2 a2 + 3 a3 = 0 with a3 = 1
    coeffs = (Scalar.exact(9, 0) / 4, Scalar.exact(-3, 0) / 2, Scalar.exact(-3, 0) / 4, 1)
    assert sum(((-1) ** j * a for j, a in enumerate(coeffs)), Scalar.exact(0)) == 2
    assert sum(coeffs, Scalar.exact(0)) == 1
    assert sum((j * a for j, a in enumerate(coeffs)), Scalar.exact(0)) == 0
    ctx = Context().with_atoms(c=2 * PI)
    for s in (1, 3):
        u = s * I * PI / C
        f = ExpPoly.exp(u) + ExpPoly.z()
        eq = NonlinearShiftEquation(2, 1, ExpPoly.poly([0, -1]), ExpPoly.exp(2 * u),
                                    LinearShift(C, coeffs))
        assert verify_nonlinear(f, eq, ctx).passed


def test_rational_q_cleared_denominator():
    fx = fixtures.get("linear_z_exp")
    f, eq, ctx = fx.build()
    assert eq.denominator == ExpPoly.poly([1, 1])
    assert verify_nonlinear(f, eq, ctx).passed


def test_factorized_route_agrees_on_random_instances():
    rng = random.Random(2024)
    pi_i = I * PI
    agree_true = 0
    for trial in range(200):
        f = sum((ExpPoly.exp(rng.randint(-2, 2), Scalar.exact(rng.randint(-3, 3),
                                                              rng.randint(-3, 3)))
                 for _ in range(rng.randint(1, 3))), ExpPoly.zero())
        kind = rng.randrange(3)
        if kind == 0:
            op = DiffDelta(rng.randint(1, 3), pi_i, Poly([Scalar.exact(rng.randint(1, 4),
                                                                       rng.randint(-2, 2))]))
        elif kind == 1:
            op = LinearShift(pi_i, tuple(Scalar.exact(rng.randint(-3, 3)) for _ in range(2))
                             + (Scalar.exact(1),))
        else:
            op = MixedDelay(rng.randint(0, 3), rng.randint(0, 3), 2 * pi_i, 1,
                            Scalar.exact(rng.randint(1, 3)), Poly([I]))
        g = apply(op, f)
        exact_rhs = f * f + g * g
        if trial % 2 == 0 and not exact_rhs.is_zero():
            rhs = exact_rhs
        else:
            rhs = ExpPoly.constant(Scalar.exact(rng.randint(1, 5)))
        eq = FermatEquation(op, rhs)
        symbolic = fermat_residual(f, eq).is_zero()
        assert verify_factorized(f, eq) == symbolic
        agree_true += symbolic
    assert agree_true > 50
