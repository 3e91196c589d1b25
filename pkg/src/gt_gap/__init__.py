"""Certified norm gaps for trilinear forms built from 3-term progressions.

The package constructs the cubic-phase progression form on Z_p, bounds its
jointly completely bounded norm from above through the Gowers U^3 norm, and
bounds the symmetrized completely bounded norm of its symmetrization from
below with an explicit family of commuting contractions.
"""

from .certificates import (
    GapReport,
    VerificationReport,
    gap_certificate,
    jcb_upper_bound,
    random_sign_survey,
    sym_lower_bound,
    varopoulos_witness,
    verify_gvn,
    verify_vdc,
    weil_u3_closed_form,
)
from .errors import (
    DegenerateInputError,
    GapError,
    InternalError,
    InvalidArgumentError,
    ParseError,
    ResourceLimitError,
)
from .gowers import (
    MatrixFunction,
    ScalarFunction,
    matrix_gowers_norm,
    random_sign_function,
    scalar_gowers_norm,
    weil_cubic_function,
)
from .groups import FiniteAbelianGroup, make_cyclic
from .linalg import commutator_norm, kron, operator_norm, random_contraction
from .trilinear import (
    Permutation3,
    TrilinearForm,
    ap_form,
    delta,
    embed,
    get_slice,
    is_symmetric,
    l2_norm_sq,
    lift_eval,
    permute,
    symmetrize,
)

__version__ = "0.1.0"
