"""Exponential-polynomial kit for Fermat-type delay-differential and c-shift equations."""
from .scalar import Context, DEFAULT_CONTEXT, Scalar, parse_scalar
from .exppoly import (
    ExpPoly,
    ExpTerm,
    Poly,
    ep_add,
    ep_derive,
    ep_eval,
    ep_mul,
    ep_pow,
    ep_scale,
    ep_shift,
    growth_order,
    normalize,
)
from .operators import DiffDelta, Difference, LinearShift, MixedDelay, apply, delta_c

from .verifier import (
    FermatEquation,
    NonlinearShiftEquation,
    VerificationReport,
    fermat_residual,
    nonlinear_residual,
    sample_residual,
    verify_factorized,
    verify_fermat,
    verify_nonlinear,
)
from .builder import (
    CoshForm,
    SolutionFamily,
    ac_to_c,
    build_case_i,
    build_case_ii,
    build_mixed,
    build_sin_family,
    mixed_case,
    solve_shift_coeffs,
)
from .nonexistence import (
    AnsatzSpace,
    ExhaustionCertificate,
    FoundSolution,
    GateVerdict,
    ansatz_search,
    gate,
)
from .spec import SpecFile, dump_spec, parse_spec

__version__ = "0.1.0"
