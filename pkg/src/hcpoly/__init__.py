"""hcpoly: operator dynamics on complex polynomials.

Exact (rational-complex) and floating (arbitrary-precision binary) arithmetic
for polynomials and truncated power series; composition-differentiation
operator families with closed-form powers; right-inverse constructions; and
certified convergence, synthesis, and decay checks.
"""

from .dynamics import (
    coefficient_bound_check,
    criterion_check,
    decay_envelope_check,
    plan_for_indices,
    slimit_check,
    synthesize_hc_vector,
)
from .inverses import (
    InverseExpansion,
    f_n,
    right_inverse_psiT,
    s_mn,
    s_mn_kernel_defect,
    s_psi_lambda_g,
    s_psi_power_coeffs,
)
from .operators import (
    OperatorSpec,
    ShiftSequence,
    apply,
    apply_power,
    commute_rhs,
    compose_op,
    conv_op,
    diff_op,
    l_op,
    orbit,
    power_closed_form,
    psi_t_op,
    shift_r,
    t_op,
)
from .parsing import PolyParseError, parse_poly, parse_scalar, render_poly, render_scalar
from .poly import NEG_INF, Disk, Poly, binom
from .scalar import EXACT, Backend, BackendMismatchError, Scalar
from .series import Series

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BackendMismatchError",
    "Disk",
    "EXACT",
    "InverseExpansion",
    "NEG_INF",
    "OperatorSpec",
    "Poly",
    "PolyParseError",
    "Scalar",
    "Series",
    "ShiftSequence",
    "apply",
    "apply_power",
    "binom",
    "coefficient_bound_check",
    "commute_rhs",
    "compose_op",
    "conv_op",
    "criterion_check",
    "decay_envelope_check",
    "diff_op",
    "f_n",
    "l_op",
    "orbit",
    "parse_poly",
    "parse_scalar",
    "plan_for_indices",
    "power_closed_form",
    "psi_t_op",
    "render_poly",
    "render_scalar",
    "right_inverse_psiT",
    "s_mn",
    "s_mn_kernel_defect",
    "s_psi_lambda_g",
    "s_psi_power_coeffs",
    "shift_r",
    "slimit_check",
    "synthesize_hc_vector",
    "t_op",
]
