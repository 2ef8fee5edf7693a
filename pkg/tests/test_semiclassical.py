from fractions import Fraction as F

import pytest

from conftest import FAMILIES, basis_for
from wopskit.errors import BandViolation, CrossCheckFailure, VerificationFailure
from wopskit.exact_linalg import RMatrix
from wopskit.mpoly import PolyMatrix, variables
from wopskit.pearson import L_apply_row
from wopskit.semiclassical import (
    compress_ddr,
    compress_structure,
    ddr_coeffs,
    gradient_gram,
    operator_gram_identity_holds,
    quasi_orthogonality_violations,
    recover_psi,
    structure_coeffs,
)

x1, x2 = variables(2)
VALID = ["appell", "appell_type_1", "appell_type_2", "wedge"]


def test_gradient_gram_examples():
    u, pair = FAMILIES["appell"]
    basis = basis_for("appell", 6)
    assert gradient_gram(u, pair, basis, 0, 3).is_zero()
    assert gradient_gram(u, pair, basis, 1, 1) == RMatrix.from_rows([[F(-1, 6), F(1, 12)], [F(1, 12), F(-1, 6)]])
    assert quasi_orthogonality_violations(u, pair, basis) == []


def test_quasi_orthogonality_strict_on_appell_type():
    u, pair = FAMILIES["appell_type_1"]
    basis = basis_for("appell_type_1", 6)
    assert quasi_orthogonality_violations(u, pair, basis) == []
    assert any(not gradient_gram(u, pair, basis, n - 1, n).is_zero() for n in range(2, 7))


def test_structure_examples():
    u, pair = FAMILIES["appell"]
    basis = basis_for("appell", 6)
    assert structure_coeffs(u, pair, basis, 1).nonzero() == [0, 1, 2]
    u, pair = FAMILIES["appell_type_1"]
    sc = structure_coeffs(u, pair, basis_for("appell_type_1", 6), 2)
    assert set(sc.nonzero()) <= set(range(5))


def test_structure_band_violation_on_bad_pair():
    u, pair = FAMILIES["appell"]
    basis = basis_for("appell", 6)
    # the wedge Phi paired with the triangle functional
    bad = FAMILIES["wedge"][1]
    with pytest.raises(BandViolation) as err:
        for n in range(1, 5):
            structure_coeffs(u, bad, basis, n)
    assert err.value.indices
    assert structure_coeffs(u, bad, basis, 4, strict=False).violations


@pytest.mark.parametrize("name", VALID)
def test_compressed_structure_degrees(name):
    u, pair = FAMILIES[name]
    basis = basis_for(name, 6)
    for n in range(pair.s + 1, 5):
        M1, M2 = compress_structure(pair, basis, n)
        assert M1.degree <= pair.s and M2.degree <= pair.s + 1


def test_ddr_classical_single_band():
    u, pair = FAMILIES["appell"]
    basis = basis_for("appell", 6)
    for n in range(1, 5):
        dd = ddr_coeffs(u, pair, basis, n)
        assert dd.nonzero() == [n]
        assert L_apply_row(pair, basis.column(n).T) == basis.P[n].T @ dd.Lam[n]
        N1, N2 = compress_ddr(pair, basis, n)
        assert N1.is_zero()
        assert N2 == PolyMatrix.constant(dd.Lam[n], 2)


def test_ddr_appell_type_band():
    u, pair = FAMILIES["appell_type_1"]
    basis = basis_for("appell_type_1", 6)
    assert set(ddr_coeffs(u, pair, basis, 3).nonzero()) <= {2, 3, 4}
    N1, N2 = compress_ddr(pair, basis, 2)
    assert N1.degree <= 0 and N2.degree <= 1


@pytest.mark.parametrize("name", VALID)
def test_lambda_zero_always_vanishes(name):
    u, pair = FAMILIES[name]
    basis = basis_for(name, 6)
    for n in range(0, 5):
        assert ddr_coeffs(u, pair, basis, n).Lam[0].is_zero()


def test_operator_gram_identity_off_band():
    u, pair = FAMILIES["appell_type_1"]
    basis = basis_for("appell_type_1", 6)
    assert all(operator_gram_identity_holds(u, pair, basis, m, n) for m in range(7) for n in range(5))


def test_operator_gram_identity_fails_without_pearson():
    u, pair = FAMILIES["example2"]
    basis = basis_for("example2", 5)
    with pytest.raises(CrossCheckFailure):
        for n in range(0, 4):
            ddr_coeffs(u, pair, basis, n)


@pytest.mark.parametrize("name", VALID)
def test_recover_psi(name):
    u, pair = FAMILIES[name]
    basis = basis_for(name, 6)
    assert recover_psi(u, pair.phi, basis, pair.s) == pair.psi
    assert recover_psi(u, pair.phi, basis, pair.s + 1) == pair.psi


def test_recover_psi_fails_for_example2_phi():
    u, pair = FAMILIES["example2"]
    with pytest.raises(VerificationFailure):
        recover_psi(u, pair.phi, basis_for("example2", 5), pair.s)
