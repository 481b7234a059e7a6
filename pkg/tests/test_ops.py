import pytest
from mpmath import mp, mpf

from e6lax.errors import IndexOutOfRange, OnSupportLattice
from e6lax.ops import eval_p


def test_support_table_matches_direct_weight(ctx, params):
    assert ctx.table(params.t).spot_check(params) < mpf("1e-60")


def test_moment_tails_are_negligible(ctx, params):
    d = ctx.data(params.t)
    assert d.tail_bound < mpf("1e-50")


def test_orthonormality_diagonal(ctx, params):
    d = ctx.data(params.t)
    table = ctx.table(params.t)
    for n in range(4):
        val, _ = table.integrate(
            lambda y, w, n=n: eval_p(n, y, d) ** 2 * w)
        assert abs(val - 1) < mpf("1e-60")


def test_orthogonality_off_diagonal(ctx, params):
    d = ctx.data(params.t)
    table = ctx.table(params.t)
    for m, n in ((0, 1), (0, 3), (1, 2), (2, 4)):
        val, _ = table.integrate(
            lambda y, w, m=m, n=n: eval_p(m, y, d) * eval_p(n, y, d) * w)
        assert abs(val) < mpf("1e-60")


def test_edge_indices(ctx, params):
    d = ctx.data(params.t)
    assert eval_p(-1, mpf(2), d) == 0
    assert d.a[0] == 1
    with pytest.raises(IndexOutOfRange):
        eval_p(d.N + 1, mpf(2), d)


def test_second_kind_recurrence_vs_direct(ctx, params):
    x = mpf(7) / 4
    t = params.t
    for n in (0, 1, 2):
        rec = ctx.eval_q(n, x, t)
        direct = ctx.eval_q_direct(n, x, t)
        assert abs(rec - direct) < mpf("1e-55") * max(1, abs(direct))


def test_lattice_collision_guard(ctx, params):
    with pytest.raises(OnSupportLattice):
        ctx.stieltjes(1 / params.b2, params.t)


def test_fundamental_matrix_determinant(ctx, params):
    # a_n w(x) det Y_n(x) = 1, independent of x
    t = params.t
    d = ctx.data(t)
    for x in (mpf(9) / 5, mpf(-13) / 6):
        for n in (1, 2):
            val = d.a[n] * ctx.weight(x, t) * ctx.y_matrix(n, x, t).det()
            assert abs(val - 1) < mpf("1e-60")
