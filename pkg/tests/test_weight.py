import pytest
from mpmath import mp, mpf

from e6lax.errors import FactorVanishes
from e6lax.weight import (
    Params, check_wv_rs, chi, deformation_data, spectral_data, weight_eval,
)


def test_parameter_product_constraint():
    with pytest.raises(FactorVanishes):
        Params(q="1/2", t="1/3", b1="3/2", b2="4/5", b3="5/7", b6="2/3",
               b4="2")  # b1 b2 b3 b4 != 1


def test_q_inside_unit_disc_required():
    with pytest.raises(FactorVanishes):
        Params(q="1", t="1/3", b1="3/2", b2="4/5", b3="5/7", b6="2/3")
    with pytest.raises(FactorVanishes):
        Params(q="3/2", t="1/3", b1="3/2", b2="4/5", b3="5/7", b6="2/3")


def test_derived_parameters(params):
    assert abs(params.b4 - mpf(7) / 6) < params.tol
    assert abs(params.b5 - mpf(7) / 12) < params.tol
    p2 = params.with_index(2)
    assert abs(p2.b5 - params.q * params.b5) < params.tol


def test_semiclassical_ratio_pointwise(params):
    sd = spectral_data(params, params.t)
    for x in (mpf(3) / 7, mpf(-5) / 4, mpf(9) / 2):
        lhs = weight_eval(params.q * x, params.t, params) * sd.w_minus(x)
        rhs = weight_eval(x, params.t, params) * sd.w_plus(x)
        assert abs(lhs - rhs) < mpf("1e-60") * max(1, abs(rhs))


def test_time_ratio_pointwise(params):
    dd = deformation_data(params, params.t)
    for x in (mpf(2) / 5, mpf(-7) / 3):
        lhs = weight_eval(x, params.q * params.t, params) * dd.r_minus(x)
        rhs = weight_eval(x, params.t, params) * dd.r_plus(x)
        assert abs(lhs - rhs) < mpf("1e-60") * max(1, abs(rhs))


def test_spectral_deformation_consistency(params):
    for x in (mpf(5) / 8, mpf(-3) / 2, mpf(11) / 6):
        assert check_wv_rs(params, params.t, x) < mpf("1e-60")


def test_multiplier_is_shift_ratio_of_pole_pair(params):
    # chi(x) = q D(x)/D(qx) for D(x) = (x - b6 q t)(x - q t / b6), the
    # factor that moves the double pole pair one lattice step
    p = params
    t = p.t

    def dpair(x):
        return (x - p.b6 * p.q * t) * (x - p.q * t / p.b6)

    for x in (mpf(4) / 9, mpf(-8) / 5):
        lhs = chi(x, t, p)
        rhs = p.q * dpair(x) / dpair(p.q * x)
        assert abs(lhs - rhs) < mpf("1e-60") * max(1, abs(rhs))
