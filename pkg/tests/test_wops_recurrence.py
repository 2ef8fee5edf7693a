from fractions import Fraction as F

import pytest

from wopskit.errors import DegreeOverflow, NotQuasiDefinite, RankDeficient
from wopskit.exact_linalg import RMatrix
from wopskit.functionals import PointMass, SimplexJacobi
from wopskit.mpoly import MPoly, PolyMatrix, variables
from wopskit.recurrence import (
    RecurrenceData,
    backward_inverse,
    build_recurrence,
    check_rank_conditions,
    forward_inverse,
    recurrence_residual,
)
from wopskit.wops import build_monic_wops, expand_in_basis, is_positive_definite, orthogonality_defect

x1, x2 = variables(2)


def test_degree_zero_block():
    u = PointMass([0, 0], 3)
    basis = build_monic_wops(u, 0)
    assert basis.P[0] == PolyMatrix.column([1], 2)
    assert basis.H[0] == RMatrix.from_rows([[3]])


def test_triangle_degree_one(triangle_basis):
    assert triangle_basis.P[1] == PolyMatrix.column([x1 - F(1, 3), x2 - F(1, 3)], 2)
    assert triangle_basis.H[1] == RMatrix.from_rows([[F(1, 18), F(-1, 36)], [F(-1, 36), F(1, 18)]])


def test_orthogonality_and_definiteness(triangle, triangle_basis):
    assert orthogonality_defect(triangle, triangle_basis) == []
    assert all(is_positive_definite(H) for H in triangle_basis.H)


def test_point_mass_not_quasi_definite():
    with pytest.raises(NotQuasiDefinite) as err:
        build_monic_wops(PointMass([0, 0], 1), 3)
    assert err.value.degree == 1


def test_expansion(triangle, triangle_basis):
    c = expand_in_basis(triangle, triangle_basis, x1 - F(1, 3))
    assert c[1] == RMatrix.row([1, 0])
    assert all(v.is_zero() for j, v in c.items() if j != 1)
    assert expand_in_basis(triangle, triangle_basis, MPoly.constant(2, 1))[0] == RMatrix.row([1])
    c = expand_in_basis(triangle, triangle_basis, x1)
    assert c[0] == RMatrix.row([F(1, 3)]) and c[1] == RMatrix.row([1, 0])
    with pytest.raises(DegreeOverflow):
        expand_in_basis(triangle, triangle_basis, x1 ** 9)


@pytest.fixture(scope="module")
def rec(triangle, triangle_basis):
    return build_recurrence(triangle, triangle_basis)


def test_recurrence_examples(rec):
    assert rec.A[0, 1] == RMatrix.row([1, 0])
    assert rec.A[0, 2] == RMatrix.row([0, 1])
    assert rec.B[0, 1] == RMatrix.row([F(1, 3)])
    assert rec.C[1, 1] == RMatrix.column([F(1, 18), F(-1, 36)])


def test_recurrence_residuals_and_ranks(rec):
    for n in range(6):
        for i in (1, 2):
            assert recurrence_residual(rec, n, i).is_zero()
    assert check_rank_conditions(rec) == []


def test_forward_inverse(rec, triangle_basis):
    fw = forward_inverse(rec, 0)
    assert rec.stacked_A(0) == RMatrix.identity(2)
    assert fw.Dt[1] == RMatrix.column([1, 0]) and fw.Dt[2] == RMatrix.column([0, 1])
    assert fw.E_n == RMatrix.column([F(-1, 3), F(-1, 3)])
    for n in range(1, 5):
        fw = forward_inverse(rec, n)  # raises unless the identity holds exactly
        stacked = RMatrix.from_rows([row for i in (1, 2) for row in fw.Dt[i].T.to_rows()]).T
        assert stacked @ rec.stacked_A(n) == RMatrix.identity(rec.basis.r(n + 1))


def test_forward_inverse_univariate():
    from wopskit.functionals import MomentFunctional

    class Uniform01(MomentFunctional):
        def _moment(self, alpha):
            return F(1, alpha[0] + 1)

    u = Uniform01(1)
    rec = build_recurrence(u, build_monic_wops(u, 4))
    for n in range(3):
        a = rec.A[n, 1][0, 0]
        assert forward_inverse(rec, n).Dt[1] == RMatrix.from_rows([[1 / a]])


def test_backward_inverse(rec):
    for n in range(1, 5):
        for i in (1, 2):
            G = backward_inverse(rec, n, i)
            assert G @ rec.C[n, i] == RMatrix.identity(rec.basis.r(n - 1))


def test_rank_deficient_c(rec):
    bad_C = dict(rec.C)
    bad_C[1, 1] = RMatrix.zeros(2, 1)
    broken = RecurrenceData(rec.basis, rec.A, rec.B, bad_C)
    with pytest.raises(RankDeficient):
        backward_inverse(broken, 1, 1)
    assert any("C[1,1]" in p for p in check_rank_conditions(broken))


def test_three_variables():
    u = SimplexJacobi([0, F(1, 2), 1], 2)
    rec = build_recurrence(u, build_monic_wops(u, 3))
    assert check_rank_conditions(rec) == []
    for n in range(3):
        forward_inverse(rec, n)
