"""Monic weak orthogonal polynomial systems and their Gram blocks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegreeOverflow, IdentityViolation, NotQuasiDefinite, RankDeficient
from .exact_linalg import RMatrix, det, inverse
from .functionals import MomentFunctional
from .mpoly import MPoly, PolyMatrix, monomial_basis


@dataclass(frozen=True)
class WopsBasis:
    """P[n] is the column of monic polynomials of degree n, H[n] = <u, P_n P_n^t>."""

    d: int
    N: int
    P: tuple[PolyMatrix, ...]
    H: tuple[RMatrix, ...]
    H_inv: tuple[RMatrix, ...] = field(repr=False)

    def r(self, n: int) -> int:
        return self.P[n].rows if 0 <= n <= self.N else 0

    def column(self, n: int) -> PolyMatrix:
        """P_n as an r_n x 1 matrix; the empty column for n < 0."""
        if n < 0:
            return PolyMatrix(0, 1, self.d, [])
        if n > self.N:
            raise DegreeOverflow(f"degree {n} exceeds basis degree {self.N}")
        return self.P[n]

    def polys(self, n: int) -> list[MPoly]:
        return list(self.column(n).entries)


def build_monic_wops(u: MomentFunctional, N: int) -> WopsBasis:
    """Block Gram-Schmidt of the graded monomial basis against ``u``.

    Each entry of P_n is x^alpha minus its u-orthogonal projection onto the
    polynomials of degree < n.  Raises NotQuasiDefinite(n) at the first
    singular H_n.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    d = u.d
    Ps: list[PolyMatrix] = []
    Hs: list[RMatrix] = []
    Hinv: list[RMatrix] = []
    for n in range(N + 1):
        entries = []
        for alpha in monomial_basis(d, n):
            m = MPoly.monomial(alpha)
            p = m
            for j in range(n):
                # coefficient row <u, x^alpha P_j^t> H_j^{-1}
                proj = RMatrix.row([u.pair(m * q) for q in Ps[j].entries]) @ Hinv[j]
                for q, c in zip(Ps[j].entries, proj.entries):
                    if c:
                        p = p - q * c
            entries.append(p)
        Pn = PolyMatrix.column(entries, d)
        Hn = u.pair_matrix(Pn @ Pn.T)
        try:
            Hn_inv = inverse(Hn)
        except RankDeficient:
            raise NotQuasiDefinite(n) from None
        Ps.append(Pn)
        Hs.append(Hn)
        Hinv.append(Hn_inv)
    return WopsBasis(d, N, tuple(Ps), tuple(Hs), tuple(Hinv))


def fourier_row(u: MomentFunctional, basis: WopsBasis, R: PolyMatrix) -> dict[int, RMatrix]:
    """Coefficients C_j with R = sum_j P_j^t C_j for a polynomial row (or matrix) R.

    R may have several rows; every row is expanded independently, C_j then
    has shape (rows * r_j) x cols with one r_j-block per row of R.
    """
    deg = R.degree
    if deg > basis.N:
        raise DegreeOverflow(f"degree {deg} exceeds basis degree {basis.N}")
    top = int(deg) if deg >= 0 else 0
    out = {}
    for j in range(top + 1):
        blocks = []
        for i in range(R.rows):
            Ri = R.submatrix(i, i + 1, 0, R.cols)
            blocks.extend((basis.H_inv[j] @ u.pair_matrix(basis.P[j] @ Ri)).entries)
        out[j] = RMatrix(R.rows * basis.r(j), R.cols, blocks)
    return out


def expand_in_basis(u: MomentFunctional, basis: WopsBasis, f: MPoly) -> dict[int, RMatrix]:
    """Fourier coefficients c_j (1 x r_j) with f = sum_j c_j P_j, checked by reconstruction."""
    coeffs = {j: C.T for j, C in fourier_row(u, basis, PolyMatrix.row([f], f.d)).items()}
    total = MPoly.zero(f.d)
    for j, c in coeffs.items():
        total = total + (PolyMatrix.constant(c, f.d) @ basis.P[j])[0, 0]
    if total != f:
        raise IdentityViolation("Fourier expansion does not reproduce the polynomial")
    return coeffs


def is_positive_definite(H: RMatrix) -> bool:
    """Symmetric with every leading principal minor positive."""
    if H != H.T:
        return False
    return all(det(H.submatrix(0, k, 0, k)) > 0 for k in range(1, H.rows + 1))


def orthogonality_defect(u: MomentFunctional, basis: WopsBasis) -> list[tuple[int, int]]:
    """Pairs (n, m), m < n, for which <u, P_n P_m^t> is not the zero matrix."""
    bad = []
    for n in range(basis.N + 1):
        for m in range(n):
            if not u.pair_matrix(basis.P[n] @ basis.P[m].T).is_zero():
                bad.append((n, m))
    return bad

