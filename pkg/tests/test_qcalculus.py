from fractions import Fraction

from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from e6lax.errors import E6LaxError
from e6lax.qcalculus import e_qt, qpochhammer, theta_q

mp.prec = 256

Q = mpf(1) / 2

nonzero = st.fractions(min_value="-4", max_value="4").filter(
    lambda f: abs(f) > Fraction(1, 8))


def _val(fr):
    return mpf(fr.numerator) / fr.denominator


@given(nonzero)
@settings(max_examples=25, deadline=None)
def test_theta_shift_identity(z_fr):
    z = _val(z_fr)
    lhs = theta_q(Q * z, Q)
    rhs = theta_q(z, Q) / (Q * z)
    assert abs(lhs - rhs) < mpf("1e-65") * max(1, abs(rhs))


@given(nonzero, nonzero)
@settings(max_examples=25, deadline=None)
def test_double_argument_shift_identities(z_fr, t_fr):
    z, t = _val(z_fr), _val(t_fr)
    try:
        base = e_qt(z, t, Q)
        shifted = (e_qt(Q * z, t, Q), e_qt(z, Q * t, Q))
    except E6LaxError:
        return  # argument on the theta lattice; identity not defined there
    assert abs(shifted[0] - base / t) < mpf("1e-60") * max(1, abs(base / t))
    assert abs(shifted[1] - base / z) < mpf("1e-60") * max(1, abs(base / z))


def test_qpochhammer_finite_vs_infinite():
    a = mpf(1) / 3
    n = 5
    finite = qpochhammer(a, Q, n)
    ratio = qpochhammer(a, Q) / qpochhammer(a * Q ** n, Q)
    assert abs(finite - ratio) < mpf("1e-70")


def test_qpochhammer_recursion():
    a = mpf(2) / 7
    assert abs(qpochhammer(a, Q) - (1 - a) * qpochhammer(Q * a, Q)) \
        < mpf("1e-70")


def test_qpochhammer_zero_factor():
    assert abs(qpochhammer(mpf(1), Q)) == 0
