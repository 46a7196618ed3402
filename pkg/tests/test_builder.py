import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import _draws
from fermat_kit import (
    Context,
    ExpPoly,
    Poly,
    Scalar,
    ac_to_c,
    build_case_i,
    build_case_ii,
    build_mixed,
    build_sin_family,
    mixed_case,
    solve_shift_coeffs,
    verify_fermat,
)
from fermat_kit.builder import shift_system_certificate
from fermat_kit.errors import (
    ConsistencyFailure,
    DegenerateParameters,
    EvenK,
    Infeasible,
    LeadingCoefficientZero,
    ZeroW,
)
from fermat_kit.fixtures import cosh_form

I = Scalar.imag_unit()
PI = Scalar.atom("pi")
C = Scalar.atom("c")


# -- constant Q, odd k -----------------------------------------------------------------


def test_case_i_reproduces_cosh_3z_plus_2():
    fam = build_case_i(1, I * PI, 1, 2, 3, b=2)
    assert fam.params["a"] == 3
    assert fam.params["R"] == Scalar.exact(-1) / (6 * I)
    assert fam.rhs == ExpPoly.constant(6)
    assert fam.solution == cosh_form(3, Scalar.atom("e", 2), 2, 3)
    assert fam.report.passed


def test_case_i_cosh_z():
    fam = build_case_i(1, I * PI, 0, 1, 1)
    assert fam.params["R"] == I / 2
    assert fam.solution == cosh_form(1, 1)
    assert fam.report.passed


def test_case_i_even_k():
    with pytest.raises(EvenK):
        build_case_i(2, I * PI, 0, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 3, 5, 7]), st.integers(-3, 3),
       st.fractions(Fraction(1, 2), 4, max_denominator=6))
def test_case_i_leading_relation_is_exact(k, m, q):
    c = (2 * m + 1) * I * PI / Scalar.exact(q)
    fam = build_case_i(k, c, m, 1, 1, verify=False)
    a, R = fam.params["a"], fam.params["R"]
    assert 2 * I * R * a ** k + 1 == 0
    assert all(r == 0 for _, r in fam.side_conditions)


# -- polynomial Q, e^{ac} = 1 --------------------------------------------------------------


def test_case_ii_linear_q():
    a, alpha, beta = Scalar.atom("a"), Scalar.atom("alpha"), Scalar.atom("beta")
    ctx = Context().with_atoms(a=1, c=2 * I * PI, alpha=2, beta=-3)
    fam = build_case_ii(1, a, C, Poly([0, alpha]), Poly([0, beta]), b=1, ctx=ctx)
    assert fam.op.R == Poly([0, (I * a * C).inv()])
    assert fam.rhs == ExpPoly.poly([0, 0, alpha * beta])
    assert fam.params["P(Q1)"] == Poly([I * a * alpha * C])
    assert fam.report.passed


def test_case_ii_mismatched_degrees_fail_consistency():
    with pytest.raises(ConsistencyFailure) as info:
        build_case_ii(1, 1, 2 * I * PI, Poly([0, 1]), Poly([0, 0, 1]))
    # the assembled equation is independently confirmed to fail
    assert info.value.report is not None
    assert not info.value.report.symbolic_pass
    assert info.value.report.sample_max_abs > 1e-3


def test_case_ii_constant_q_rejected():
    with pytest.raises(DegenerateParameters):
        build_case_ii(1, 1, 2 * I * PI, Poly([2]), Poly([0, 1]))


# -- mixed delay ------------------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_parity_dispatch(m, n):
    expected = {(True, True): "I", (False, False): "II", (True, False): "III",
                (False, True): "IV"}[(m % 2 == 0, n % 2 == 0)]
    assert mixed_case(m, n) == expected
    try:
        fam = build_mixed(m, n, 1, Scalar.exact(5, 1), Scalar.exact(3, 2) / 2, branch_k=1)
    except DegenerateParameters:
        pytest.skip("degenerate parameters for this parity")
    assert fam.params["case"] == expected
    assert fam.report.passed


@pytest.mark.parametrize("branch", [1, -1])
def test_case_i_surd_roots(branch):
    fam = build_mixed(2, 2, 1, 3, 2, b=3, branch=branch)
    s = math.sqrt(2)
    w = fam.params["w"].to_complex()
    assert fam.params["backend"] == "float"
    assert min(abs(w - (-3 + 2 * s)), abs(w - (-3 - 2 * s))) < 1e-12
    # R^2 = 1 / (a^4 - 9 a^4) = -1/2^7
    assert abs(fam.params["R2"].to_complex() + 1 / 2 ** 7) < 1e-15
    assert fam.report.passed and fam.exclusions_ok


def test_case_ii_example():
    fam = build_mixed(1, 3, 5, 1, 3, b=4, branch=-1)
    assert fam.params["w"] == -1
    # i R (-15 + 27) = 1
    assert fam.params["R"] == -I / 12
    assert fam.params["R2"] == Scalar.exact(-1, 0) / 144
    assert fam.report.passed


def test_case_iv_example():
    roots = {}
    for branch in (1, -1):
        fam = build_mixed(1, 2, 3, 2, 2, b=1, branch=branch)
        roots[fam.params["w"]] = fam
        assert fam.report.passed
    third = Scalar.exact(1, 0) / 3
    assert set(roots) == {third, Scalar.exact(-3)}
    fam = roots[third]
    # i R (6 (1/3) + 8) = 1
    assert fam.params["R"] == -I / 10
    assert fam.params["R2"] == Scalar.exact(-1, 0) / 100


def test_case_iii_example():
    fam = build_mixed(2, 3, 1, 3, 1, b=2)
    assert fam.params["case"] == "III"
    assert fam.params["w"] == I
    assert fam.report.passed and fam.side_residuals_ok()


def test_mixed_side_relations_hold_on_random_draws():
    rng = random.Random(11)
    for case in ("I", "II", "III", "IV"):
        for _, fam in _draws.admissible(build_mixed, lambda r: _draws.mixed_params(r, case),
                                        rng, 10):
            assert fam.params["case"] == case
            assert fam.report.passed
            rel = dict(fam.side_conditions)["shift_relation"]
            assert abs(rel.to_complex(fam.ctx.env)) < 1e-12
            assert fam.exclusions_ok


def test_case_i_unsigned_ratio_is_diagnostic():
    fam = build_mixed(2, 2, 1, 3, 2, b=0)
    assert "w_in_unsigned_ratio_set" in fam.params
    names = [name for name, _ in fam.exclusions_checked]
    assert names == ["w_not_neg_Y_over_X", "w_not_conjugate_root", "w_not_plus_minus_one"]


def test_mixed_degenerate_case_i():
    # a^(m-n) = B/A makes the discriminant vanish
    with pytest.raises(DegenerateParameters):
        build_mixed(2, 2, 1, 1, 2)


# -- ac_to_c -------------------------------------------------------------------------------


def test_ac_to_c_examples():
    assert abs(ac_to_c(1, 1, 1).to_complex() - 2j * math.pi) < 1e-15
    assert abs(ac_to_c(I, 1).to_complex() - 1j * math.pi / 2) < 1e-15
    w = -3 + 2 * math.sqrt(2)
    c = ac_to_c(Scalar.float(w), 2).to_complex()
    assert abs(c.real - math.log(3 - 2 * math.sqrt(2)) / 2) < 1e-15
    assert abs(cmath.exp(2 * c) - w) < 1e-12
    with pytest.raises(ZeroW):
        ac_to_c(0, 1)


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10),
       st.complex_numbers(min_magnitude=0.2, max_magnitude=5), st.integers(-2, 2))
def test_ac_to_c_round_trip(w, a, k):
    c = ac_to_c(Scalar.from_complex(w), Scalar.from_complex(a), k).to_complex()
    assert abs(cmath.exp(a * c) - w) < 1e-12 * max(1, abs(w)) * (1 + abs(k))


# -- shift coefficients --------------------------------------------------------------------


def test_shift_coeffs_tau1_w_i():
    a0, a1 = solve_shift_coeffs(1, I)
    assert (a0, a1) == (0, -1)
    assert a0 != a1 and a0 != -a1


def test_shift_coeffs_tau2():
    coeffs = solve_shift_coeffs(2, I, {2: 1})
    assert coeffs == (1, -1, 1)


@pytest.mark.parametrize("w", [1, -1, 1.0, -1.0])
def test_unimodular_shift_infeasible(w):
    with pytest.raises(Infeasible) as info:
        solve_shift_coeffs(1, w)
    assert info.value.rule == "unimodular_shift"


def test_difference_pins_infeasible_with_certificate():
    with pytest.raises(Infeasible) as info:
        solve_shift_coeffs(1, Scalar.exact(2, 1), {0: -1, 1: 1})
    assert info.value.rule == "difference_operator"
    cert = info.value.certificate
    assert cert["g1"] == Poly([Scalar.exact(-1, 1), 1])    # -1 + w + i
    assert cert["g2"] == Poly([1, Scalar.exact(-1, -1)])   # 1 - (1 + i) w
    assert cert["gcd"].degree == 0 and not cert["common_root"]


def test_certificate_finds_common_root_when_there_is_one():
    cert = shift_system_certificate([0, -1])  # a0 = 0, a1 = -1 works for w = i
    assert cert["common_root"]


def test_pinned_leading_zero():
    with pytest.raises(LeadingCoefficientZero):
        solve_shift_coeffs(1, I, {1: 0})


def test_shift_coeffs_tau1_half():
    # a0 + a1/2 = -i and a0 + 2 a1 = i give a1 = 4i/3, a0 = -5i/3
    a0, a1 = solve_shift_coeffs(1, Scalar.exact(Fraction(1, 2), 0))
    assert (a0, a1) == (Scalar.exact(0, Fraction(-5, 3)), Scalar.exact(0, Fraction(4, 3)))


def test_pinned_contradiction():
    with pytest.raises(Infeasible) as info:
        solve_shift_coeffs(1, Scalar.exact(2), {0: 1})
    assert info.value.rule == "pinned_contradiction"


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(min_magnitude=0.2, max_magnitude=5), st.integers(1, 4))
def test_shift_coeffs_satisfy_both_equations(w, tau):
    if abs(abs(w) - 1) < 1e-6 and min(abs(w - 1), abs(w + 1)) < 1e-6:
        return
    W = Scalar.from_complex(w)
    try:
        coeffs = solve_shift_coeffs(tau, W)
    except Infeasible as exc:
        assert exc.rule == "first_order_pair" and tau == 1
        return
    a = [x.to_complex() for x in coeffs]
    scale = sum(abs(x) * max(abs(w), 1 / abs(w)) ** j for j, x in enumerate(a))
    assert abs(sum(x * w ** j for j, x in enumerate(a)) + 1j) < 1e-12 * max(1, scale)
    assert abs(sum(x * w ** -j for j, x in enumerate(a)) - 1j) < 1e-12 * max(1, scale)
    assert abs(a[-1]) > 0


# -- sine family --------------------------------------------------------------------------


def test_sin_family_tau1():
    fam = build_sin_family(C, 1, ctx=Context().with_atoms(c=1))
    assert fam.op.coeffs == (0, -1)
    assert fam.report.passed


def test_sin_family_tau2():
    fam = build_sin_family(C, 2, {2: 1}, ctx=Context().with_atoms(c=1))
    assert fam.op.coeffs == (1, -1, 1)
    assert fam.report.passed


@pytest.mark.parametrize("tau", [3, 4])
def test_sin_family_larger_tau(tau):
    fam = build_sin_family(C, tau, ctx=Context().with_atoms(c=Scalar.exact(3, 0) / 2))
    assert fam.report.passed and fam.side_residuals_ok()


def test_sin_family_leading_zero():
    with pytest.raises(LeadingCoefficientZero):
        build_sin_family(C, 1, {1: 0}, ctx=Context().with_atoms(c=1))


def test_sin_family_renders_sine():
    fam = build_sin_family(Scalar.float(1.3), 1)
    f = fam.solution
    for z in (0.2, 1 + 0.5j, -0.7j):
        val = sum(p.coeffs[0].to_complex() * cmath.exp(mu.to_complex() * z) for p, mu in f.terms)
        assert abs(val - cmath.sin(math.pi * z / 2.6)) < 1e-12


def test_builder_output_is_independent_of_verifier_flag():
    fam = build_case_i(3, I * PI, 2, 2, 5, verify=False)
    assert fam.report is None
    assert verify_fermat(fam.solution, fam.equation, fam.ctx).passed
