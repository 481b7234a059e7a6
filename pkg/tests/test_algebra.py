import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf, mpc

from e6lax.algebra import (
    Mat2, Poly, mat2_inv, poly_interpolate, relative_residual, scalar,
)
from e6lax.errors import DuplicateNode, HoldoutMismatch, SingularMatrix

mp.prec = 256

small_int = st.integers(min_value=-9, max_value=9)
coeff_lists = st.lists(small_int, min_size=1, max_size=5)


@given(coeff_lists, coeff_lists, small_int)
@settings(max_examples=40, deadline=None)
def test_poly_product_evaluates_pointwise(ca, cb, x):
    pa = Poly([mpf(c) for c in ca])
    pb = Poly([mpf(c) for c in cb])
    assert abs((pa * pb)(x) - pa(x) * pb(x)) < mpf("1e-60")


@given(coeff_lists, coeff_lists, small_int)
@settings(max_examples=40, deadline=None)
def test_poly_sum_evaluates_pointwise(ca, cb, x):
    pa = Poly([mpf(c) for c in ca])
    pb = Poly([mpf(c) for c in cb])
    assert abs((pa + pb)(x) - (pa(x) + pb(x))) < mpf("1e-60")


def test_from_roots_vanishes_at_roots():
    roots = [mpf(2), mpf(-3), mpf("0.5")]
    p = Poly.from_roots(roots, leading=mpf(7))
    for r in roots:
        assert abs(p(r)) < mpf("1e-70")
    assert p.coeff(3) == 7


def test_interpolation_recovers_polynomial():
    target = Poly([mpf(1), mpf(-2), mpf(3), mpf(5)])
    nodes = [mpf(k) / 3 + 1 for k in range(5)]
    got = poly_interpolate([(x, target(x)) for x in nodes], 3)
    for k in range(4):
        assert abs(got.coeff(k) - target.coeff(k)) < mpf("1e-70")


def test_interpolation_rejects_duplicate_nodes():
    with pytest.raises(DuplicateNode):
        poly_interpolate([(mpf(1), mpf(0)), (mpf(1), mpf(2)),
                          (mpf(3), mpf(1))], 1)


def test_interpolation_rejects_wrong_degree():
    # cubic data, quadratic degree bound, one holdout node
    target = Poly([mpf(0), mpf(0), mpf(0), mpf(1)])
    nodes = [mpf(k + 1) for k in range(4)]
    with pytest.raises(HoldoutMismatch):
        poly_interpolate([(x, target(x)) for x in nodes], 2)


def test_mat2_inverse():
    m = Mat2(mpf(2), mpf(1), mpf(7), mpf(4))
    prod = m * mat2_inv(m)
    assert (prod - Mat2(1, 0, 0, 1)).norm() < mpf("1e-70")


def test_mat2_inverse_singular_raises():
    with pytest.raises(SingularMatrix):
        mat2_inv(Mat2(mpf(1), mpf(2), mpf(2), mpf(4)))


def test_relative_residual_scale_free():
    big = mpf("1e40")
    assert relative_residual(big, big * (1 + mpf("1e-50"))) < mpf("1e-45")


def test_scalar_parses_rational_strings():
    assert abs(scalar("3/7") - mpf(3) / 7) < mpf("1e-70")
