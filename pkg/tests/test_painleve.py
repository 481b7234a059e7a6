from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from e6lax.errors import SingularStep
from e6lax.painleve import (
    PainleveState, orbit, rhs_first, rhs_second, roundtrip_residual,
    step_backward, step_forward,
)
from e6lax.weight import default_params

P = default_params()
mp.prec = P.precision

generic = st.fractions(min_value="-3", max_value="3").filter(
    lambda f: abs(f) > Fraction(1, 16))


def _val(fr):
    return mpf(fr.numerator) / fr.denominator


@given(generic, generic)
@settings(max_examples=30, deadline=None)
def test_first_rhs_forms_agree(g_fr, t_fr):
    g, t = _val(g_fr), _val(t_fr)
    try:
        a = rhs_first(g, t, P, form="product")
        b = rhs_first(g, t, P, form="expanded")
    except SingularStep:
        return
    assert abs(a - b) < mpf("1e-60") * max(1, abs(a))


def test_forward_backward_inverse(env, params):
    f, g = env.fg()
    s = PainleveState(f, g, params.t)
    back = step_backward(step_forward(s, params), params)
    assert abs(back.f - s.f) < mpf("1e-55")
    assert abs(back.g - s.g) < mpf("1e-55")
    assert roundtrip_residual(s, params, steps=3) < mpf("1e-55")


def test_orbit_shapes(env, params):
    f, g = env.fg()
    s = PainleveState(f, g, params.t)
    fwd = orbit(s, params, 3)
    assert len(fwd) == 4
    assert abs(fwd[-1].t - params.t * params.q ** 3) < params.tol
    bwd = orbit(s, params, -2)
    assert len(bwd) == 3
    assert abs(bwd[-1].t - params.t / params.q ** 2) < params.tol


def test_orbit_matches_extraction(env, params):
    f, g = env.fg()
    f1, g1 = env.fg(tick=1)
    stepped = step_forward(PainleveState(f, g, params.t), params)
    assert abs(stepped.f - f1) < mpf("1e-55") * max(1, abs(f1))
    assert abs(stepped.g - g1) < mpf("1e-55") * max(1, abs(g1))


def test_singular_seed_raises(params):
    with pytest.raises(SingularStep):
        step_forward(PainleveState(mpf(0), mpf(1) / 2, params.t), params)
