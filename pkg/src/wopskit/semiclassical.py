"""Structure relation, gradient quasi-orthogonality and the differential-difference
relation for a WOPS and a Pearson pair.

Band checks raise :class:`BandViolation` when ``strict`` is true and are
only recorded on the returned object otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BandViolation,
    CrossCheckFailure,
    DegreeOverflow,
    IdentityViolation,
    Inconsistent,
    NoSolution,
    VerificationFailure,
)
from .exact_linalg import RMatrix, solve
from .functionals import MomentFunctional
from .mpoly import MPoly, PolyMatrix, grad_row, gradient, monomials_up_to, poly_kron, poly_vstack
from .pearson import PearsonPair, L_apply_row
from .wops import WopsBasis, fourier_row


def gradient_gram(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, m: int, n: int) -> RMatrix:
    """Q_{m,n} = <u, (grad P_m^t)^t Phi grad P_n^t>, an r_m x r_n matrix."""
    Gm = grad_row(basis.column(m))
    Gn = grad_row(basis.column(n))
    return u.pair_matrix(Gm.T @ pair.phi @ Gn)


def quasi_orthogonality_violations(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis) -> list[tuple[int, int]]:
    """(m, n) with n >= s+1, 0 <= m < n-s and Q_{m,n} != 0."""
    s = pair.s
    bad = []
    for n in range(s + 1, basis.N + 1):
        for m in range(0, n - s):
            if not gradient_gram(u, pair, basis, m, n).is_zero():
                bad.append((m, n))
    return bad


# -- structure relation -------------------------------------------------------------


@dataclass
class StructureCoeffs:
    """F[j] is d*r_j x r_n with Phi grad P_n^t = sum_j (I_d x P_j^t) F[j]."""

    n: int
    F: dict[int, RMatrix]
    band: tuple[int, int] | None
    violations: list[int] = field(default_factory=list)

    def nonzero(self) -> list[int]:
        return [j for j, Fj in sorted(self.F.items()) if not Fj.is_zero()]


def structure_band(pair: PearsonPair, n: int) -> tuple[int, int] | None:
    if n < pair.s + 1:
        return None
    return (n - pair.s - 1, n + pair.p - 1)


def structure_coeffs(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, n: int, strict: bool = True) -> StructureCoeffs:
    d = pair.d
    R = pair.phi @ grad_row(basis.column(n))
    if R.degree > basis.N:
        raise DegreeOverflow(f"structure relation at n={n} needs a basis of degree {int(R.degree)}")
    F = fourier_row(u, basis, R)

    total = PolyMatrix.zeros(d, basis.r(n), d)
    I_d = RMatrix.identity(d)
    for j, Fj in F.items():
        if not Fj.is_zero():
            total = total + poly_kron(I_d, basis.P[j].T) @ Fj
    if total != R:
        raise IdentityViolation(f"structure relation reconstruction fails at n={n}")

    band = structure_band(pair, n)
    result = StructureCoeffs(n, F, band)
    if band is not None:
        lo, hi = band
        result.violations = [j for j in result.nonzero() if not lo <= j <= hi]
        if result.violations and strict:
            raise BandViolation(f"F_j^{n} nonzero outside [{lo}, {hi}] for j in {result.violations}",
                                result.violations)
    return result


# -- differential-difference relation -----------------------------------------------


@dataclass
class DdrCoeffs:
    """Lam[i] is r_i x r_n with L[P_n^t] = sum_i P_i^t Lam[i]."""

    n: int
    Lam: dict[int, RMatrix]
    band: tuple[int, int]
    violations: list[int] = field(default_factory=list)

    def nonzero(self) -> list[int]:
        return [i for i, Li in sorted(self.Lam.items()) if not Li.is_zero()]


def ddr_band(pair: PearsonPair, n: int) -> tuple[int, int]:
    if n >= pair.s + 1:
        return (n - pair.s, n + pair.s)
    return (1, n + pair.s)


def lambda_via_operator(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, m: int, n: int) -> RMatrix:
    """H_m^{-1} <u, P_m L[P_n^t]>."""
    LP = L_apply_row(pair, basis.column(n).T)
    return basis.H_inv[m] @ u.pair_matrix(basis.column(m) @ LP)


def lambda_via_gradients(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, m: int, n: int) -> RMatrix:
    """-H_m^{-1} Q_{m,n}."""
    return -(basis.H_inv[m] @ gradient_gram(u, pair, basis, m, n))


def operator_gram_identity_holds(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, m: int, n: int) -> bool:
    """<u, P_m L[P_n^t]> == -<u, (grad P_m^t)^t Phi grad P_n^t>."""
    LP = L_apply_row(pair, basis.column(n).T)
    lhs = u.pair_matrix(basis.column(m) @ LP)
    return lhs == -gradient_gram(u, pair, basis, m, n)


def ddr_coeffs(u: MomentFunctional, pair: PearsonPair, basis: WopsBasis, n: int, strict: bool = True) -> DdrCoeffs:
    """Lambda_i^n by both routes, which must agree for every i <= basis.N."""
    top = n + pair.s
    if top > basis.N:
        raise DegreeOverflow(f"differential-difference relation at n={n} needs degree {top}")
    LP = L_apply_row(pair, basis.column(n).T)
    phi_grad_n = pair.phi @ grad_row(basis.column(n))
    Lam = {}
    for m in range(basis.N + 1):
        via_op = basis.H_inv[m] @ u.pair_matrix(basis.column(m) @ LP)
        via_grad = -(basis.H_inv[m] @ u.pair_matrix(grad_row(basis.column(m)).T @ phi_grad_n))
        if via_op != via_grad:
            raise CrossCheckFailure(f"Lambda_{m}^{n}: operator and gradient routes disagree")
        if m <= top:
            Lam[m] = via_op

    total = PolyMatrix.zeros(1, basis.r(n), pair.d)
    for i, Li in Lam.items():
        if not Li.is_zero():
            total = total + basis.P[i].T @ Li
    if total != LP:
        raise IdentityViolation(f"L[P_{n}^t] is not reproduced by its expansion")

    lo, hi = ddr_band(pair, n)
    result = DdrCoeffs(n, Lam, (lo, hi))
    result.violations = [i for i in result.nonzero() if not lo <= i <= hi]
    if result.violations and strict:
        raise BandViolation(f"Lambda_i^{n} nonzero outside [{lo}, {hi}] for i in {result.violations}",
                            result.violations)
    return result


# -- compressed forms ---------------------------------------------------------------


def _degree_bounded_solve(targets: PolyMatrix, factors: list[tuple[PolyMatrix, int]]) -> list[PolyMatrix]:
    """Find polynomial matrices M_k with deg M_k <= bound_k such that, for every

    column c of ``targets`` (a 1 x r row), targets[0, c] = sum_k P_k^t M_k[:, c]
    where each P_k is a column of polynomials.  A negative bound forces M_k = 0.
    Returns one M_k per factor; raises Inconsistent when no solution exists.
    """
    d = targets.d
    unknowns = []  # (factor index, row in M_k, monomial)
    columns = []
    for k, (P, bound) in enumerate(factors):
        monos = monomials_up_to(d, bound) if bound >= 0 else []
        for a in range(P.rows):
            for gamma in monos:
                unknowns.append((k, a, gamma))
                columns.append(P[a, 0] * MPoly.monomial(gamma))
    support = set()
    for c in columns:
        support.update(c.terms)
    for e in targets.entries:
        support.update(e.terms)
    rows = sorted(support, key=lambda a: (sum(a), a), reverse=True)
    index = {a: i for i, a in enumerate(rows)}

    A = [[0] * len(columns) for _ in rows]
    for j, c in enumerate(columns):
        for a, coef in c.terms.items():
            A[index[a]][j] = coef
    B = [[0] * targets.cols for _ in rows]
    for col in range(targets.cols):
        for a, coef in targets[0, col].terms.items():
            B[index[a]][col] = coef

    if columns:
        X = solve(RMatrix.from_rows(A, len(columns)), RMatrix.from_rows(B, targets.cols))
    else:
        if any(any(r) for r in B):
            raise Inconsistent("target is nonzero but no unknowns are allowed")
        X = RMatrix.zeros(0, targets.cols)

    out = []
    for k, (P, _) in enumerate(factors):
        entries = [[MPoly.zero(d) for _ in range(targets.cols)] for _ in range(P.rows)]
        for j, (kk, a, gamma) in enumerate(unknowns):
            if kk != k:
                continue
            for col in range(targets.cols):
                c = X[j, col]
                if c:
                    entries[a][col] = entries[a][col] + MPoly.monomial(gamma, c)
        out.append(PolyMatrix.from_rows(entries, d) if P.rows else PolyMatrix(0, targets.cols, d, []))
    return out


def compress_structure(pair: PearsonPair, basis: WopsBasis, n: int) -> tuple[PolyMatrix, PolyMatrix]:
    """(M_1, M_2) with Phi grad P_n^t = (I_d x P_{n+1}^t) M_1 + (I_d x P_n^t) M_2,

    deg M_1 <= s and deg M_2 <= s + 1.  M_1 is d*r_{n+1} x r_n, M_2 is d*r_n x r_n.
    """
    s, d = pair.s, pair.d
    if n < s + 1:
        raise ValueError(f"compressed structure relation needs n >= s+1 = {s + 1}")
    R = pair.phi @ grad_row(basis.column(n))
    Pn1, Pn = basis.column(n + 1), basis.column(n)
    M1_blocks, M2_blocks = [], []
    for i in range(d):
        try:
            M1, M2 = _degree_bounded_solve(R.submatrix(i, i + 1, 0, R.cols), [(Pn1, s), (Pn, s + 1)])
        except Inconsistent:
            raise NoSolution(f"no degree-bounded structure coefficients at n={n}") from None
        M1_blocks.append(M1)
        M2_blocks.append(M2)
    M1, M2 = poly_vstack(M1_blocks), poly_vstack(M2_blocks)
    I_d = RMatrix.identity(d)
    if poly_kron(I_d, Pn1.T) @ M1 + poly_kron(I_d, Pn.T) @ M2 != R:
        raise IdentityViolation("compressed structure relation does not reproduce Phi grad P_n^t")
    return M1, M2


def compress_ddr(pair: PearsonPair, basis: WopsBasis, n: int) -> tuple[PolyMatrix, PolyMatrix]:
    """(N_1, N_2) with L[P_n^t] = P_{n+1}^t N_1 + P_n^t N_2, deg N_1 <= s-1, deg N_2 <= s."""
    s = pair.s
    if n < s + 1:
        raise ValueError(f"compressed differential-difference relation needs n >= s+1 = {s + 1}")
    LP = L_apply_row(pair, basis.column(n).T)
    Pn1, Pn = basis.column(n + 1), basis.column(n)
    try:
        N1, N2 = _degree_bounded_solve(LP, [(Pn1, s - 1), (Pn, s)])
    except Inconsistent:
        raise NoSolution(f"no degree-bounded operator coefficients at n={n}") from None
    if Pn1.T @ N1 + Pn.T @ N2 != LP:
        raise IdentityViolation("compressed differential-difference relation does not reproduce L[P_n^t]")
    return N1, N2


# -- recovering Psi -----------------------------------------------------------------


def recover_psi(u: MomentFunctional, phi: PolyMatrix, basis: WopsBasis, s_bound: int) -> PolyMatrix:
    """Psi = -sum_{i<=s_bound+1} <u, (grad P_1^t)^t Phi grad P_i^t> H_i^{-1} P_i.

    The result is checked against the weak Pearson equation on every
    monomial of degree <= basis.N.
    """
    d = basis.d
    if s_bound < 0:
        raise ValueError("s_bound must be >= 0")
    if s_bound + 1 > basis.N:
        raise DegreeOverflow(f"need a basis of degree >= {s_bound + 1}")
    G1 = grad_row(basis.column(1))
    if G1 != PolyMatrix.identity(d, d):
        raise ValueError("recover_psi needs a monic basis (grad P_1^t = I)")
    psi = PolyMatrix.zeros(d, 1, d)
    for i in range(1, s_bound + 2):
        Q = u.pair_matrix(G1.T @ phi @ grad_row(basis.column(i)))
        psi = psi - (Q @ basis.H_inv[i]) @ basis.column(i)

    for alpha in monomials_up_to(d, basis.N):
        f = MPoly.monomial(alpha)
        r = u.pair_matrix(phi @ gradient(f) + psi * f)
        if not r.is_zero():
            raise VerificationFailure(
                f"recovered Psi violates the weak Pearson equation at x^{alpha}"
            )
    return psi
