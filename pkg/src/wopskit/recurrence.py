"""Three-term recurrence matrices and the two inverted recurrences.

Coordinates are numbered from 1, so ``A[n, 1]`` multiplies x_1.  Every
identity is verified as an exact polynomial identity before data is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegreeOverflow, IdentityViolation, RankDeficient
from .exact_linalg import RMatrix, left_inverse, rank, vstack
from .functionals import MomentFunctional
from .mpoly import MPoly, PolyMatrix, basis_position, monomial_basis
from .wops import WopsBasis


def shift_matrix(d: int, n: int, i: int) -> RMatrix:
    """0/1 matrix sending x^alpha (|alpha| = n) to x^(alpha + e_i)."""
    pos = basis_position(d, n + 1)
    rows = monomial_basis(d, n)
    cols = len(pos)
    out = [0] * (len(rows) * cols)
    for r, alpha in enumerate(rows):
        beta = alpha[:i - 1] + (alpha[i - 1] + 1,) + alpha[i:]
        out[r * cols + pos[beta]] = 1
    return RMatrix(len(rows), cols, out)


def _xi(d: int, i: int) -> MPoly:
    return MPoly.var(d, i)


def recurrence_matrices(u: MomentFunctional, basis: WopsBasis, n: int, i: int) -> tuple[RMatrix, RMatrix, RMatrix]:
    """(A_{n,i}, B_{n,i}, C_{n,i}) with x_i P_n = A P_{n+1} + B P_n + C P_{n-1}."""
    if n + 1 > basis.N:
        raise DegreeOverflow(f"need a basis of degree >= {n + 1}")
    d = basis.d
    x = _xi(d, i)
    Pn = basis.P[n]
    xPn = Pn * x
    A = shift_matrix(d, n, i)
    B = u.pair_matrix(xPn @ Pn.T) @ basis.H_inv[n]
    if n == 0:
        C = RMatrix.zeros(basis.r(0), 0)
    else:
        C = u.pair_matrix(xPn @ basis.P[n - 1].T) @ basis.H_inv[n - 1]
    rhs = A @ basis.P[n + 1] + B @ Pn
    if n > 0:
        rhs = rhs + C @ basis.P[n - 1]
    if rhs != xPn:
        raise IdentityViolation(f"three-term recurrence fails at n={n}, i={i}")
    return A, B, C


@dataclass(frozen=True)
class RecurrenceData:
    """Recurrence matrices keyed by (n, i) for 0 <= n < basis.N and 1 <= i <= d."""

    basis: WopsBasis = field(repr=False)
    A: dict[tuple[int, int], RMatrix]
    B: dict[tuple[int, int], RMatrix]
    C: dict[tuple[int, int], RMatrix]

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def max_n(self) -> int:
        return self.basis.N - 1

    def stacked_A(self, n: int) -> RMatrix:
        return vstack([self.A[n, i] for i in range(1, self.d + 1)])


def build_recurrence(u: MomentFunctional, basis: WopsBasis) -> RecurrenceData:
    A, B, C = {}, {}, {}
    for n in range(basis.N):
        for i in range(1, basis.d + 1):
            A[n, i], B[n, i], C[n, i] = recurrence_matrices(u, basis, n, i)
    return RecurrenceData(basis, A, B, C)


def check_rank_conditions(rec: RecurrenceData) -> list[str]:
    """Human-readable list of violated rank conditions (empty when all hold)."""
    basis = rec.basis
    problems = []
    for n in range(rec.max_n + 1):
        rn, rn1 = basis.r(n), basis.r(n + 1)
        for i in range(1, rec.d + 1):
            if rank(rec.A[n, i]) != rn:
                problems.append(f"rank A[{n},{i}] != r_{n}")
            if n >= 1 and rank(rec.C[n, i]) != basis.r(n - 1):
                problems.append(f"rank C[{n},{i}] != r_{n - 1}")
        if rank(rec.stacked_A(n)) != rn1:
            problems.append(f"rank A_{n} != r_{n + 1}")
    return problems


@dataclass(frozen=True)
class ForwardInverse:
    n: int
    Dt: dict[int, RMatrix]
    E_n: RMatrix
    E_prev: RMatrix


def forward_inverse(rec: RecurrenceData, n: int) -> ForwardInverse:
    """P_{n+1} = sum_i x_i D_{n,i}^t P_n + E_n^{n+1} P_n + E_{n-1}^{n+1} P_{n-1}.

    D^t is the canonical left inverse of the stacked A_n, split into d blocks.
    """
    d, basis = rec.d, rec.basis
    An = rec.stacked_A(n)
    if rank(An) != basis.r(n + 1):
        raise RankDeficient(f"stacked A_{n} does not have rank r_{n + 1}")
    Dt_full = left_inverse(An)
    rn = basis.r(n)
    Dt = {i: Dt_full.submatrix(0, Dt_full.rows, (i - 1) * rn, i * rn) for i in range(1, d + 1)}
    E_n = RMatrix.zeros(basis.r(n + 1), rn)
    E_prev = RMatrix.zeros(basis.r(n + 1), basis.r(n - 1))
    for i in range(1, d + 1):
        E_n = E_n - Dt[i] @ rec.B[n, i]
        E_prev = E_prev - Dt[i] @ rec.C[n, i]

    Pn = basis.P[n]
    rhs = E_n @ Pn
    for i in range(1, d + 1):
        rhs = rhs + (Dt[i] @ Pn) * _xi(d, i)
    if n > 0:
        rhs = rhs + E_prev @ basis.P[n - 1]
    if rhs != basis.P[n + 1]:
        raise IdentityViolation(f"forward inverse recurrence fails at n={n}")
    return ForwardInverse(n, Dt, E_n, E_prev)


def backward_inverse(rec: RecurrenceData, n: int, i: int) -> RMatrix:
    """G_{n,i}, the canonical left inverse of C_{n,i}, after checking

    P_{n-1} = -G A_{n,i} P_{n+1} + (x_i G - G B_{n,i}) P_n.
    """
    if n < 1:
        raise ValueError("backward inverse needs n >= 1")
    G = left_inverse(rec.C[n, i])
    basis = rec.basis
    Pn = basis.P[n]
    rhs = (-(G @ rec.A[n, i])) @ basis.P[n + 1] + (G @ Pn) * _xi(rec.d, i) - (G @ rec.B[n, i]) @ Pn
    if rhs != basis.P[n - 1]:
        raise IdentityViolation(f"backward inverse recurrence fails at n={n}, i={i}")
    return G


def recurrence_residual(rec: RecurrenceData, n: int, i: int) -> PolyMatrix:
    """x_i P_n - A P_{n+1} - B P_n - C P_{n-1}; the zero column when the recurrence holds."""
    basis = rec.basis
    res = basis.P[n] * _xi(rec.d, i) - rec.A[n, i] @ basis.P[n + 1] - rec.B[n, i] @ basis.P[n]
    if n > 0:
        res = res - rec.C[n, i] @ basis.P[n - 1]
    return res
