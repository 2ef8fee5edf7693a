from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from wopskit.mpoly import (
    MPoly,
    PolyMatrix,
    dim_homogeneous,
    divergence_weak_companion,
    gradient,
    grad_row,
    monomial_basis,
    variables,
)
from wopskit.pearson import appell_phi

x1, x2 = variables(2)


def test_monomial_basis_order():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(3, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert monomial_basis(1, 5) == ((5,),)


@pytest.mark.parametrize("d,n", [(1, 4), (2, 5), (3, 4), (4, 3)])
def test_monomial_count(d, n):
    basis = monomial_basis(d, n)
    assert len(basis) == dim_homogeneous(d, n) == comb(n + d - 1, n)
    assert list(basis) == sorted(basis, reverse=True)


def test_gradient_examples():
    assert gradient(x1 * x1 * x2) == PolyMatrix.column([x1 * x2 * 2, x1 * x1], 2)
    assert gradient(MPoly.constant(2, 1)).is_zero()
    y = variables(3)
    assert gradient(y[0] + y[1] + y[2]) == PolyMatrix.column([1, 1, 1], 3)


def test_grad_row_examples():
    assert grad_row(PolyMatrix.column([x1, x2], 2)) == PolyMatrix.identity(2, 2)
    assert grad_row(PolyMatrix.column([1], 2)).is_zero()
    G = grad_row(PolyMatrix.column([x1 * x1, x1 * x2, x2 * x2], 2))
    assert G == PolyMatrix.from_rows([[x1 * 2, x2, 0], [0, x1, x2 * 2]], 2)


def test_divergence_examples():
    assert divergence_weak_companion(PolyMatrix.identity(2, 2)).is_zero()
    div = divergence_weak_companion(appell_phi(2))
    assert div[0, 0] == x1 * 3 - 1
    assert divergence_weak_companion(PolyMatrix.from_rows([[x1, 0], [0, x2]], 2)) == PolyMatrix.row([1, 1], 2)


def test_arithmetic_examples():
    assert x1 * x1 == MPoly.monomial((2, 0))
    assert (x1 + x2) * (x1 - x2) == x1 ** 2 - x2 ** 2
    g = gradient(x1 ** 3 + x2)
    assert PolyMatrix.identity(2, 2) @ g == g


def test_render():
    assert (x1 - F(1, 3)).render() == "x1 - 1/3"
    assert (x1 * x1 * x2).render() == "x1^2*x2"
    assert (x1 * 2).render() == "2*x1"
    assert MPoly.zero(2).render() == "0"


def test_evaluation_and_degree():
    p = x1 * x1 * x2 - x2 * F(1, 2) + 3
    assert p(2, 4) == 16 - 2 + 3
    assert p.degree == 3
    assert MPoly.zero(2).degree < 0


polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-4, max_value=4, max_denominator=5),
    max_size=5,
).map(lambda t: MPoly(2, t))


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_product_rule(f, g):
    for i in (1, 2):
        assert (f * g).diff(i) == f.diff(i) * g + f * g.diff(i)


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_degree_additivity(f, g):
    if not f.is_zero() and not g.is_zero():
        assert (f * g).degree == f.degree + g.degree


@settings(max_examples=50, deadline=None)
@given(polys, polys, st.integers(-3, 3), st.integers(-3, 3))
def test_evaluation_is_ring_homomorphism(f, g, a, b):
    assert (f * g)(a, b) == f(a, b) * g(a, b)
    assert (f + g)(a, b) == f(a, b) + g(a, b)
