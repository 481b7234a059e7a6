import pytest
from mpmath import mp, mpf

from e6lax import laxpair
from e6lax.weight import spectral_data


def test_spectral_entries_have_expected_degrees(env):
    a_star = env.astar()
    assert len(a_star.w_plus_entry.coeffs) == 4
    assert len(a_star.w_minus_entry.coeffs) == 4
    assert len(a_star.t_plus.coeffs) <= 3
    assert len(a_star.t_minus.coeffs) <= 3


def test_spectral_determinant_factorizes(env, records):
    assert records["spectral.determinant"].passed


def test_transfer_step_consistency(env, params):
    # K_n maps the fundamental matrix at n to the one at n+1
    ctx = env.ctx()
    t = params.t
    for x in (mpf(12) / 11, mpf(-9) / 4):
        for n in (1, 2):
            lhs = laxpair.kn_transfer(n, x, t, ctx) * ctx.y_matrix(n, x, t)
            rhs = ctx.y_matrix(n + 1, x, t)
            assert (lhs - rhs).norm() < mpf("1e-55") * max(1, rhs.norm())


def test_extraction_roundtrip(env, params):
    p = params
    a_star = env.astar()
    lam, nu, mu = laxpair.extract_lambda_mu_nu(a_star, p)
    zp, zm = laxpair.zpm_from_mu_nu(lam, nu, mu, p)
    nu2, mu2 = laxpair.mu_nu_from_zpm(lam, zp, zm, p)
    assert abs(mu - mu2) < mpf("1e-60") * max(1, abs(mu))
    assert abs(nu - nu2) < mpf("1e-60") * max(1, abs(nu))


def test_offdiagonal_root_equals_extracted_g(env, params):
    lam, _, _ = laxpair.extract_lambda_mu_nu(env.astar(), params)
    f, g = env.fg()
    assert abs(lam - g) < mpf("1e-55") * max(1, abs(g))


def test_closed_form_variants_agree(env, params):
    p = params
    ctx = env.ctx()
    f, g = env.fg()
    a_n = ctx.data(p.t).a[1]
    xg = laxpair.astar_closed_form(f, g, p.t, a_n, p, form="g")
    xf = laxpair.astar_closed_form(f, g, p.t, a_n, p, form="f")
    for x in (mpf(8) / 5, mpf(-7) / 6):
        diff = (xg.eval(x) - xf.eval(x)).norm()
        assert diff < mpf("1e-55") * max(1, xg.eval(x).norm())


def test_deformation_transfer_branch_consistency(env, params):
    rho_p, rho_m, sigma = env.ratios()
    assert sigma in (1, -1)
    b_star = env.bstar()
    # leading diagonal of the measured transfer equals the resolved ratios
    assert abs(b_star.r_plus.coeff(1) - rho_p) < mpf("1e-55")
    assert abs(b_star.r_minus.coeff(1) - rho_m) < mpf("1e-55")


def test_scalar_three_point_relation(env, params):
    p = params
    ctx = env.ctx()
    a_star = env.astar()
    res = laxpair.scalar_lsodde_residual(
        a_star, p.t, p, lambda x: ctx.eval_p(1, x, p.t), mpf(13) / 9)
    assert res < mpf("1e-55")


def test_compatibility_off_node_points(env, params):
    res = laxpair.verify_compatibility(
        env.astar(), env.astar(tick=1), env.bstar(), params.t, params,
        [mpf(19) / 11, mpf(-3) / 8, mpf(23) / 6])
    assert res < mpf("1e-55")
