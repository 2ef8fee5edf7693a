"""Matrix Pearson pairs (Phi, Psi) and the second-order operator they define.

A pair is checked in weak form: <u, Phi grad f + Psi f> = 0 for every test
monomial f up to a chosen degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadParameter, DimensionMismatch, IdentityViolation, ShapeMismatch
from .exact_linalg import RMatrix, det, to_rational
from .functionals import MomentFunctional
from .mpoly import (
    MPoly,
    MultiIndex,
    PolyMatrix,
    divergence_weak_companion,
    gradient,
    monomials_up_to,
    poly_kron,
    variables,
)


@dataclass(frozen=True)
class PearsonPair:
    phi: PolyMatrix
    psi: PolyMatrix
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        d = self.phi.d
        if self.phi.shape != (d, d):
            raise ShapeMismatch(f"Phi must be {d}x{d}, got {self.phi.shape}")
        if self.psi.shape != (d, 1) or self.psi.d != d:
            raise ShapeMismatch(f"Psi must be a {d}x1 column")
        if not self.phi.is_symmetric():
            raise BadParameter("Phi must be symmetric")
        if self.psi.degree < 1:
            raise BadParameter("deg Psi must be >= 1")

    @property
    def d(self) -> int:
        return self.phi.d

    @property
    def p(self) -> int:
        deg = self.phi.degree
        return int(deg) if deg >= 0 else 0

    @property
    def q(self) -> int:
        return int(self.psi.degree)

    @property
    def s(self) -> int:
        """Class number max(p - 2, q - 1)."""
        return max(self.p - 2, self.q - 1)

    @property
    def psi_tilde(self) -> PolyMatrix:
        """Psi minus the transposed column-divergence of Phi."""
        return self.psi - divergence_weak_companion(self.phi).T

    def with_psi(self, psi: PolyMatrix, name: str | None = None) -> PearsonPair:
        return PearsonPair(self.phi, psi, name or self.name)


def _check_dims(u: MomentFunctional, pair: PearsonPair) -> None:
    if u.d != pair.d:
        raise DimensionMismatch(f"functional has d={u.d}, pair has d={pair.d}")


def weak_residual(u: MomentFunctional, pair: PearsonPair, f: MPoly) -> RMatrix:
    """The d-vector <u, Phi grad f + Psi f>."""
    _check_dims(u, pair)
    if f.d != pair.d:
        raise DimensionMismatch("test polynomial has the wrong dimension")
    return u.pair_matrix(pair.phi @ gradient(f) + pair.psi * f)


@dataclass
class ClassifyReport:
    p: int
    q: int
    s: int
    max_degree: int
    det_condition: Fraction
    residuals_zero: bool
    failures: list[tuple[MultiIndex, RMatrix]] = field(default_factory=list)

    @property
    def semiclassical(self) -> bool:
        return self.residuals_zero and self.det_condition != 0 and self.q >= 1


def is_semiclassical(u: MomentFunctional, pair: PearsonPair, N: int) -> ClassifyReport:
    """Check the weak Pearson equation on all monomials of degree <= N and det<u, Phi>."""
    _check_dims(u, pair)
    failures = []
    for alpha in monomials_up_to(u.d, N):
        r = weak_residual(u, pair, MPoly.monomial(alpha))
        if not r.is_zero():
            failures.append((alpha, r))
    return ClassifyReport(
        p=pair.p,
        q=pair.q,
        s=pair.s,
        max_degree=N,
        det_condition=det(u.pair_matrix(pair.phi)),
        residuals_zero=not failures,
        failures=failures,
    )


def stacked_gradient(F: PolyMatrix) -> PolyMatrix:
    """For a column F of length h, the dh column (d_1 F; d_2 F; ...; d_d F)."""
    if F.cols != 1:
        raise ShapeMismatch("expected a column")
    d = F.d
    return PolyMatrix(d * F.rows, 1, d, [F[k, 0].diff(i) for i in range(1, d + 1) for k in range(F.rows)])


def kronecker_weak_residual(u: MomentFunctional, pair: PearsonPair, h: int, F: PolyMatrix) -> RMatrix:
    """<u, (Phi x I_h) grad F + (Psi x I_h) F>, a dh x 1 vector.

    Block i (rows i*h .. i*h+h-1) collects coordinate i, matching the
    ordering of the Kronecker product.
    """
    _check_dims(u, pair)
    if h < 1:
        raise BadParameter("h must be >= 1")
    if F.shape != (h, 1) or F.d != pair.d:
        raise DimensionMismatch(f"F must be an {h}x1 column in d={pair.d}")
    I_h = RMatrix.identity(h)
    expr = poly_kron(pair.phi, I_h) @ stacked_gradient(F) + poly_kron(pair.psi, I_h) @ F
    return u.pair_matrix(expr)


def kronecker_residuals_up_to(u: MomentFunctional, pair: PearsonPair, h: int, N: int) -> list[tuple[int, MultiIndex, RMatrix]]:
    """Nonzero Kronecker residuals over the test basis x^alpha e_k, |alpha| <= N."""
    bad = []
    zero = MPoly.zero(pair.d)
    for alpha in monomials_up_to(pair.d, N):
        m = MPoly.monomial(alpha)
        for k in range(h):
            F = PolyMatrix.column([m if j == k else zero for j in range(h)], pair.d)
            r = kronecker_weak_residual(u, pair, h, F)
            if not r.is_zero():
                bad.append((k, alpha, r))
    return bad


# -- the operator L -------------------------------------------------------------


def L_apply(pair: PearsonPair, f: MPoly) -> MPoly:
    """L[f] = div(Phi grad f) + Psi_tilde^t grad f, cross-checked against

    sum_ij phi_ij d_i d_j f + sum_i psi_i d_i f.
    """
    d = pair.d
    g = gradient(f)
    flux = pair.phi @ g
    divergence = MPoly.zero(d)
    for i in range(d):
        divergence = divergence + flux[i, 0].diff(i + 1)
    weak_form = divergence + (pair.psi_tilde.T @ g)[0, 0]

    explicit = MPoly.zero(d)
    for i in range(d):
        fi = f.diff(i + 1)
        explicit = explicit + pair.psi[i, 0] * fi
        for j in range(d):
            explicit = explicit + pair.phi[i, j] * fi.diff(j + 1)
    if weak_form != explicit:
        raise IdentityViolation("the two expressions for L[f] disagree")
    return explicit


def L_apply_row(pair: PearsonPair, P: PolyMatrix) -> PolyMatrix:
    return P.map(lambda e: L_apply(pair, e))


def L_star_moments(u: MomentFunctional, pair: PearsonPair, N: int) -> list[Fraction]:
    """<u, L[x^alpha]> for |alpha| <= N, in graded descending-lex order."""
    _check_dims(u, pair)
    return [u.pair(L_apply(pair, MPoly.monomial(a))) for a in monomials_up_to(u.d, N)]


# -- the built-in pairs ------------------------------------------------------------


def appell_phi(d: int) -> PolyMatrix:
    x = variables(d)
    return PolyMatrix.from_rows(
        [[x[i] * x[j] - (x[i] if i == j else 0) for j in range(d)] for i in range(d)], d
    )


def appell_pair(d: int, alpha0: Sequence, beta=0) -> PearsonPair:
    """Classical pair of the simplex weight x^alpha0 (1 - |x|)^beta.

    psi_i = (|alpha0| + beta + d + 1) x_i - (alpha0_i + 1).
    """
    alpha0 = [to_rational(a) for a in alpha0]
    beta = to_rational(beta)
    if len(alpha0) != d:
        raise BadParameter("alpha0 must have d entries")
    if any(a <= -1 for a in alpha0) or beta <= -1:
        raise BadParameter("simplex parameters must be > -1")
    x = variables(d)
    lead = sum(alpha0) + beta + d + 1
    psi = PolyMatrix.column([x[i] * lead - (alpha0[i] + 1) for i in range(d)], d)
    return PearsonPair(appell_phi(d), psi, "appell")


def appell_type_pair(d: int, alpha0: Sequence, beta=0, i: int = 1) -> PearsonPair:
    """Pair for the simplex weight plus a point mass at the origin.

    Phi_hat = x_i Phi, Psi_hat = (column i of Phi) + x_i Psi; any 1 <= i <= d works.
    """
    if not 1 <= i <= d:
        raise BadParameter(f"modification index must lie in 1..{d}")
    base = appell_pair(d, alpha0, beta)
    xi = MPoly.var(d, i)
    phi = base.phi * xi
    psi = base.phi.submatrix(0, d, i - 1, i) + base.psi * xi
    return PearsonPair(phi, psi, f"appell_type:{i}")


def example2_pair(d: int, a: Sequence) -> PearsonPair:
    """Diagonal pair printed for the Laguerre x Jacobi product weight.

    Phi = diag(x1 (x1 - xd), x2, ..., x_{d-1}, x1^2 (x1 - xd)),
    Psi = (-x1^2 + x1 xd + (a1 + 2) x1 + (ad - a1 - 1) xd, a2 - x2, ..., -(ad + 1) x1^2).

    This transcription does not satisfy the weak Pearson equation for
    :class:`LaguerreJacobi`; see :func:`example2_wedge_pair`.
    """
    a = [to_rational(v) for v in a]
    if d < 2 or len(a) != d:
        raise BadParameter("example2 needs d >= 2 and d parameters")
    if any(v <= -1 for v in a):
        raise BadParameter("parameters must be > -1")
    x = variables(d)
    x1, xd = x[0], x[d - 1]
    a1, ad = a[0], a[d - 1]
    zero = MPoly.zero(d)
    diag = [x1 * (x1 - xd)] + [x[i] for i in range(1, d - 1)] + [x1 * x1 * (x1 - xd)]
    phi = PolyMatrix.from_rows([[diag[i] if i == j else zero for j in range(d)] for i in range(d)], d)
    psi = (
        [-x1 * x1 + x1 * xd + x1 * (a1 + 2) + xd * (ad - a1 - 1)]
        + [a[i] - x[i] for i in range(1, d - 1)]
        + [x1 * x1 * (-(ad + 1))]
    )
    return PearsonPair(phi, PolyMatrix.column(psi, d), "example2")


def example2_wedge_pair(d: int, a: Sequence) -> PearsonPair:
    """A Pearson pair that does hold for :class:`LaguerreJacobi`.

    The (x1, xd) block x1 [[x1, xd], [xd, x1]] has no flux through the wedge
    edges xd = +-x1; the middle coordinates carry the Laguerre pair
    (x_i, a_i + 1 - x_i).
    """
    a = [to_rational(v) for v in a]
    if d < 2 or len(a) != d:
        raise BadParameter("example2 needs d >= 2 and d parameters")
    if any(v <= -1 for v in a):
        raise BadParameter("parameters must be > -1")
    x = variables(d)
    x1, xd = x[0], x[d - 1]
    a1, ad = a[0], a[d - 1]
    zero = MPoly.zero(d)
    rows = [[zero] * d for _ in range(d)]
    rows[0][0] = x1 * x1
    rows[0][d - 1] = rows[d - 1][0] = x1 * xd
    rows[d - 1][d - 1] = x1 * x1
    for i in range(1, d - 1):
        rows[i][i] = x[i]
    psi = (
        [x1 * (a1 + 3) - x1 * x1]
        + [(a[i] + 1) - x[i] for i in range(1, d - 1)]
        + [-x1 * ad + xd * (a1 - ad + 1) - x1 * xd]
    )
    return PearsonPair(PolyMatrix.from_rows(rows, d), PolyMatrix.column(psi, d), "example2_wedge")
