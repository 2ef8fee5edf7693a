"""Exact weak orthogonal polynomials in several variables and semiclassical functionals."""

__version__ = "0.1.0"

from .errors import (
    BadIndex,
    BadParameter,
    BandViolation,
    CrossCheckFailure,
    DegreeOverflow,
    DimensionMismatch,
    IdentityViolation,
    Inconsistent,
    NoSolution,
    NotQuasiDefinite,
    RankDeficient,
    ShapeMismatch,
    VerificationFailure,
    WopsError,
)
from .exact_linalg import RMatrix, det, inverse, kron, left_inverse, pinv, rank, rref, solve
from .functionals import (
    LaguerreJacobi,
    MomentFunctional,
    PointMass,
    SimplexJacobi,
    SumFunctional,
    appell_type,
    functional_from_descriptor,
    sum_functional,
)
from .mpoly import MPoly, PolyMatrix, gradient, monomial_basis, variables
from .pearson import (
    PearsonPair,
    L_apply,
    appell_pair,
    appell_type_pair,
    example2_pair,
    example2_wedge_pair,
    is_semiclassical,
    weak_residual,
)
from .recurrence import backward_inverse, build_recurrence, forward_inverse
from .semiclassical import compress_ddr, compress_structure, ddr_coeffs, recover_psi, structure_coeffs
from .wops import WopsBasis, build_monic_wops
