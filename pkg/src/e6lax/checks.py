"""Named verification checks shared by the CLI selftest and the tests.

Every check is a function env -> list[CheckRecord]; the registry maps a
stable check id to its function and group.  Sample points are rational and
come from a seeded generator so a report is reproducible bit for bit.
"""

import random

from mpmath import mp, mpf, mpc

from .algebra import Mat2, Poly, relative_residual, scalar
from .errors import E6LaxError
from .ops import OPSContext, eval_p
from .painleve import (
    PainleveState,
    evolution_residuals,
    gamma_ratio_sq,
    roundtrip_residual,
    step_forward,
)
from .weight import (
    check_wv_rs,
    deformation_data,
    default_params,
    spectral_data,
    weight_eval,
)
from . import laxpair
from . import correspondence as corr


class CheckRecord:
    """One residual measurement with its tolerance verdict."""

    __slots__ = ("check_id", "group", "residual", "tolerance", "passed",
                 "detail")

    def __init__(self, check_id, group, residual, tolerance, detail=""):
        self.check_id = check_id
        self.group = group
        self.residual = mpf(abs(residual))
        self.tolerance = mpf(tolerance)
        self.passed = bool(self.residual < self.tolerance)
        self.detail = detail

    def as_dict(self):
        return {
            "id": self.check_id,
            "group": self.group,
            "residual": mp.nstr(self.residual, 12, min_fixed=1, max_fixed=0),
            "tolerance": mp.nstr(self.tolerance, 3, min_fixed=1, max_fixed=0),
            "passed": self.passed,
            "detail": self.detail,
        }


TOL_TIGHT = mpf("1e-30")
TOL_MAIN = mpf("1e-25")
TOL_COMPOUND = mpf("1e-20")


def rational_points(rng, count, denom_max=64, span=8, exclude_small=True):
    """Deterministic generic rational sample points."""
    out = []
    while len(out) < count:
        num = rng.randint(1, denom_max * span)
        den = rng.randint(1, denom_max)
        val = mpf(num) / den * rng.choice([1, -1])
        if exclude_small and abs(val) < mpf(1) / 16:
            continue
        out.append(val)
    return out


class CheckEnv:
    """Lazy shared state for a verification run."""

    def __init__(self, p=None, seed=0, truncation=200):
        self.p = p if p is not None else default_params()
        self.seed = int(seed)
        self.truncation = int(truncation)
        self._ctx = {}
        self._cache = {}

    def ctx(self, n_index=1):
        if n_index not in self._ctx:
            self._ctx[n_index] = OPSContext(
                self.p.with_index(n_index), truncation=self.truncation)
        return self._ctx[n_index]

    def rng(self, tag):
        return random.Random((self.seed, tag).__repr__())

    def cached(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    # shared artifacts at the default index / time ----------------------

    @property
    def t(self):
        return self.p.t

    def astar(self, n=1, tick=0):
        t = self.t * self.p.q ** tick
        return self.cached(("astar", n, tick),
                           lambda: laxpair.astar_numeric(n, t, self.ctx()))

    def bstar(self, n=1):
        return self.cached(("bstar", n),
                           lambda: laxpair.bstar_numeric(n, self.t, self.ctx()))

    def ratios(self, n=1):
        return self.cached(("ratios", n),
                           lambda: laxpair.gamma_ratios(n, self.t, self.ctx()))

    def fg(self, tick=0, n=1):
        t = self.t * self.p.q ** tick
        return self.cached(("fg", n, tick),
                           lambda: laxpair.extract_fg(n, t, self.ctx()))


# ---------------------------------------------------------------------
# group: weight
# ---------------------------------------------------------------------

def check_weight_ratios(env):
    p = env.p
    t = p.t
    sd = spectral_data(p, t)
    dd = deformation_data(p, t)
    xs = rational_points(env.rng("weight"), 10)
    worst_sc = mpf(0)
    worst_def = mpf(0)
    for x in xs:
        w_here = weight_eval(x, t, p)
        w_up = weight_eval(p.q * x, t, p)
        worst_sc = max(worst_sc, relative_residual(
            w_up * sd.w_minus(x), w_here * sd.w_plus(x)))
        w_tick = weight_eval(x, p.q * t, p)
        worst_def = max(worst_def, relative_residual(
            w_tick * dd.r_minus(x), w_here * dd.r_plus(x)))
    return [
        CheckRecord("weight.semiclassical-ratio", "weight", worst_sc,
                    TOL_TIGHT, "10 seeded points"),
        CheckRecord("weight.deformation-ratio", "weight", worst_def,
                    TOL_TIGHT, "10 seeded points"),
    ]


def check_weight_consistency(env):
    p = env.p
    xs = rational_points(env.rng("wvrs"), 10)
    worst = max(check_wv_rs(p, p.t, x) for x in xs)
    return [CheckRecord("weight.spectral-deformation-consistency", "weight",
                        worst, TOL_TIGHT, "10 seeded points")]


# ---------------------------------------------------------------------
# group: ops
# ---------------------------------------------------------------------

def check_orthogonality(env):
    ctx = env.ctx()
    t = env.t
    d = ctx.data(t)
    table = ctx.table(t)
    worst = mpf(0)
    for n in range(1, 6):
        for m in range(n):
            val, _ = table.integrate(
                lambda y, w, m=m, n=n: eval_p(m, y, d) * eval_p(n, y, d) * w)
            worst = max(worst, abs(val))
    return [CheckRecord("ops.orthogonality", "ops", worst, TOL_MAIN,
                        "all pairs m < n <= 5")]


def check_casoratian(env):
    ctx = env.ctx()
    t = env.t
    d = ctx.data(t)
    xs = rational_points(env.rng("casoratian"), 5)
    worst = mpf(0)
    for n in (1, 2, 3):
        for x in xs:
            w = ctx.weight(x, t)
            val = d.a[n] * w * ctx.y_matrix(n, x, t).det()
            worst = max(worst, abs(val - 1))
    return [CheckRecord("ops.casoratian", "ops", worst, TOL_MAIN,
                        "n = 1..3, 5 sample x")]


def _p_coeffs(n, d):
    """Coefficient list of p_n via the recurrence on polynomials."""
    prev = Poly([mpc(0)])
    cur = Poly([mpc(d.gamma[0])])
    for k in range(n):
        nxt = (Poly([-d.b[k], 1]) * cur - prev * d.a[k]) * (1 / d.a[k + 1])
        prev, cur = cur, nxt
    return cur


def check_expansion_coefficients(env):
    ctx = env.ctx()
    d = ctx.data(env.t)
    worst = mpf(0)
    for n in (2, 3):
        poly = _p_coeffs(n, d)
        gam = d.gamma[n]
        sub1 = -sum(d.b[i] for i in range(n))
        sub2 = (sum(d.b[i] * d.b[j]
                    for i in range(n) for j in range(i + 1, n))
                - sum(d.a[i] ** 2 for i in range(1, n)))
        worst = max(worst, relative_residual(poly.coeff(n), gam))
        worst = max(worst, relative_residual(poly.coeff(n - 1), gam * sub1))
        worst = max(worst, relative_residual(poly.coeff(n - 2), gam * sub2))
    return [CheckRecord("ops.expansion-coefficients", "ops", worst, TOL_MAIN,
                        "subleading sums for p_2, p_3")]


# ---------------------------------------------------------------------
# group: spectral
# ---------------------------------------------------------------------

def check_spectral_determinant(env):
    p = env.p
    sd = spectral_data(p, env.t)
    target = sd.w_plus * sd.w_minus
    scale = target.max_coeff()
    worst = mpf(0)
    for n in (0, 1, 2):
        dp = env.astar(n=n).det_poly()
        for k in range(7):
            worst = max(worst, abs(dp.coeff(k) - target.coeff(k)) / scale)
    return [CheckRecord("spectral.determinant", "spectral", worst, TOL_MAIN,
                        "coefficientwise, n = 0, 1, 2")]


def check_spectral_leading(env):
    p = env.p
    worst = mpf(0)
    for n in (0, 1, 2):
        pn = p.with_index(n)
        a_star = env.astar(n=n)
        worst = max(worst, relative_residual(
            a_star.w_plus_entry.coeff(3), -pn.b5 * pn.b6))
        worst = max(worst, relative_residual(
            a_star.w_minus_entry.coeff(3), -pn.b6 / pn.b5))
    return [CheckRecord("spectral.leading-diagonal", "spectral", worst,
                        TOL_TIGHT, "x^3 diagonal pair, n = 0, 1, 2")]


def check_spectral_quad(env):
    p = env.p
    lam, nu, mu = laxpair.extract_lambda_mu_nu(env.astar(), p)
    res = laxpair.quad_residual(lam, nu, mu, p, env.t)
    return [CheckRecord("spectral.quadratic-identity", "spectral", res,
                        TOL_MAIN)]


def check_spectral_closed_form(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    f, g = env.fg()
    f_prev, g_prev = laxpair.extract_fg(0, t, ctx)
    a_n = ctx.data(t).a[1]
    worst = mpf(0)
    for form in ("g", "f"):
        closed = laxpair.astar_closed_form(f, g, t, a_n, p,
                                           g_prev=g_prev, form=form)
        worst = max(worst, corr.sakai_matrix_vs_spectral(
            corr.SakaiMatrix(closed.w_plus_entry, -closed.t_plus,
                             closed.t_minus, closed.w_minus_entry,
                             g, 0, 0, 1),
            env.astar(), p))
    return [CheckRecord("spectral.closed-form", "spectral", worst, TOL_MAIN,
                        "both partial-fraction variants")]


# ---------------------------------------------------------------------
# group: recurrence
# ---------------------------------------------------------------------

def check_index_recurrences(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    d = ctx.data(t)
    q = p.q
    dy2 = Poly([0, 0, (q - 1) ** 2])        # (y+ - y-)^2 = ((q-1)x)^2
    worst = mpf(0)

    def coeffwise(a_poly, b_poly):
        scale = max(mpf(1), a_poly.max_coeff(), b_poly.max_coeff())
        deg = max(len(a_poly.coeffs), len(b_poly.coeffs))
        return max(abs(a_poly.coeff(k) - b_poly.coeff(k)) / scale
                   for k in range(deg))

    mats = {n: env.astar(n=n) for n in (0, 1, 2)}
    wn = {n: mats[n].wn_poly(p, t) for n in (0, 1, 2)}
    om = {n: mats[n].omega_poly(p, t) for n in (0, 1, 2)}
    th = {n: mats[n].theta_poly(p, d.a[n] if n else mpf(1)) for n in (0, 1, 2)}
    v_poly = spectral_data(p, t).v_poly(p)
    for n in (0, 1):
        mean_shift = Poly([-d.b[n], (q + 1) / 2])    # M_x x - b_n
        worst = max(worst, coeffwise(
            wn[n + 1], wn[n] + dy2 * th[n] * mpf("0.25")))
        worst = max(worst, coeffwise(
            om[n + 1] + om[n] + v_poly * 2, mean_shift * th[n]))
        lhs = (wn[n] * om[n + 1] - wn[n + 1] * om[n]) * mean_shift
        rhs = (om[n + 1] * om[n] * dy2 * mpf("-0.25")
               + wn[n] * wn[n + 1]
               + wn[n] * th[n + 1] * d.a[n + 1] ** 2
               - wn[n + 1] * mats[n].theta_prev_poly(
                   p, d.a[n] if n else mpf(1)) * d.a[n] ** 2)
        worst = max(worst, coeffwise(lhs, rhs))
    return [CheckRecord("recurrence.spectral-coefficients", "recurrence",
                        worst, TOL_MAIN, "three relations, n = 0 -> 1 -> 2")]


# ---------------------------------------------------------------------
# group: deformation
# ---------------------------------------------------------------------

def check_deformation_structure(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    b_star = env.bstar()
    dd = deformation_data(p, t)
    a_n = ctx.data(t).a[1]
    a_hat = ctx.data(p.q * t).a[1]
    target = dd.r_plus * dd.r_minus * (a_n / a_hat)
    dp = b_star.det_poly()
    scale = max(mpf(1), target.max_coeff())
    worst_det = max(abs(dp.coeff(k) - target.coeff(k)) / scale
                    for k in range(3))
    r1p = b_star.r_plus.coeff(1)
    r1m = b_star.r_minus.coeff(1)
    worst_pr = max(
        relative_residual(b_star.p_plus, -a_hat * r1m + a_n * r1p),
        relative_residual(b_star.p_minus, -a_n * r1m + a_hat * r1p))
    return [
        CheckRecord("deformation.determinant", "deformation", worst_det,
                    TOL_MAIN),
        CheckRecord("deformation.offdiagonal-relations", "deformation",
                    worst_pr, TOL_MAIN),
    ]


def check_deformation_closed_form(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    f, g = env.fg()
    rho_p, rho_m, _ = env.ratios()
    a_n = ctx.data(t).a[1]
    a_hat = ctx.data(p.q * t).a[1]
    closed = laxpair.bstar_closed_form(f, g, t, a_n, rho_p, rho_m, a_hat, p)
    b_star = env.bstar()
    worst = mpf(0)
    for k in range(2):
        worst = max(worst, relative_residual(
            closed.r_plus.coeff(k), b_star.r_plus.coeff(k)))
        worst = max(worst, relative_residual(
            closed.r_minus.coeff(k), b_star.r_minus.coeff(k)))
    worst = max(worst, relative_residual(closed.p_plus, b_star.p_plus))
    worst = max(worst, relative_residual(closed.p_minus, b_star.p_minus))
    return [CheckRecord("deformation.closed-form", "deformation", worst,
                        TOL_MAIN, "resolved leading-ratio branch")]


def check_residue_relations(env):
    p = env.p
    res = laxpair.residue_relations(
        env.astar(), env.astar(tick=1), env.bstar(), env.t, p)
    return [CheckRecord("deformation.residue-relations", "deformation",
                        max(res), TOL_MAIN, "four pole relations")]


# ---------------------------------------------------------------------
# group: compatibility
# ---------------------------------------------------------------------

def check_compatibility(env):
    p = env.p
    xs = rational_points(env.rng("compat"), 8)
    res = laxpair.verify_compatibility(
        env.astar(), env.astar(tick=1), env.bstar(), env.t, p, xs)
    return [CheckRecord("compatibility.schlesinger", "compatibility", res,
                        TOL_MAIN, "8 seeded sample x")]


# ---------------------------------------------------------------------
# group: dynamics
# ---------------------------------------------------------------------

def check_dynamics(env):
    p = env.p
    q = p.q
    t = env.t
    states = [PainleveState(*env.fg(tick=k), t * q ** k) for k in (0, 1, 2)]
    worst_evol = mpf(0)
    for s0, s1 in zip(states, states[1:]):
        worst_evol = max(worst_evol, *evolution_residuals(s0, s1, p))
    stepped = step_forward(states[0], p)
    worst_step = max(relative_residual(stepped.f, states[1].f),
                     relative_residual(stepped.g, states[1].g))
    rho_p, _, _ = env.ratios()
    worst_third = relative_residual(gamma_ratio_sq(states[0], p), rho_p ** 2)
    worst_round = roundtrip_residual(states[0], p, steps=5)
    return [
        CheckRecord("dynamics.coupled-evolution", "dynamics", worst_evol,
                    TOL_COMPOUND, "three consecutive times"),
        CheckRecord("dynamics.step-forward", "dynamics", worst_step,
                    TOL_COMPOUND),
        CheckRecord("dynamics.third-evolution", "dynamics", worst_third,
                    TOL_COMPOUND),
        CheckRecord("dynamics.roundtrip", "dynamics", worst_round,
                    TOL_MAIN, "5 steps forward then back"),
    ]


# ---------------------------------------------------------------------
# group: sakai
# ---------------------------------------------------------------------

def check_sakai_matrix(env):
    p = env.p
    ctx = env.ctx()
    sm, a_star = corr.sakai_from_extraction(1, env.t, ctx)
    bridge = corr.sakai_matrix_vs_spectral(sm, a_star, p)
    props = max(sm.property_residuals(p, env.t))
    return [
        CheckRecord("sakai.build-vs-spectral", "sakai", bridge, TOL_MAIN),
        CheckRecord("sakai.matrix-properties", "sakai", props, TOL_MAIN,
                    "five defining properties"),
    ]


def check_sakai_deformation(env):
    p = env.p
    ctx = env.ctx()
    sm_t, sm_qt, b0 = corr.sakai_pair(1, env.t, ctx)
    xs = rational_points(env.rng("sakai-compat"), 5)
    res = corr.sakai_compat_residual(sm_t, sm_qt, b0, p, env.t, xs)
    return [CheckRecord("sakai.deformation-compatibility", "sakai", res,
                        TOL_COMPOUND, "monic deformation partner")]


def check_sakai_dictionary(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    f, g = env.fg()
    f_prev, _ = laxpair.extract_fg(1, t / p.q, ctx)
    sp, lam_s, mu1, mu2 = corr.sakai_script_data(f, g, f_prev, t, p)
    w_s = corr.sakai_w_scale(g, t, ctx.data(t).a[1], p)
    fr = corr.frak_transform(
        lambda x: corr.script_a_direct_eval(x, lam_s, mu1, mu2, w_s, sp), t)
    a_star = env.astar()
    xs = rational_points(env.rng("sakai-dict"), 5)
    worst = mpf(0)
    for x in xs:
        a = a_star.eval(x)
        worst = max(worst, (a - fr(x)).norm() / max(mpf(1), a.norm()))
    return [CheckRecord("sakai.parameter-dictionary", "sakai", worst,
                        TOL_COMPOUND, "reciprocal wrap at 5 sample x")]


# ---------------------------------------------------------------------
# group: yamada
# ---------------------------------------------------------------------

def check_yamada_scalar(env):
    p = env.p
    ctx = env.ctx()
    t = env.t
    f, g = env.fg()
    a_n = ctx.data(t).a[1]
    direct = corr.yamada_coeffs_direct(f, g, t, p)
    lax = corr.yamada_coeffs_from_lax(env.astar(), g, t, p, a_n)
    zs = rational_points(env.rng("yamada-z"), 6)
    worst = mpf(0)
    for z in zs:
        for a, b in zip(direct.triple(z), lax.triple(z)):
            worst = max(worst, abs(a - b) / max(mpf(1), abs(a)))
    return [CheckRecord("yamada.scalar-coefficients", "yamada", worst,
                        TOL_COMPOUND, "direct vs lax route, 6 sample z")]


def check_yamada_mixed(env):
    ctx = env.ctx()
    rho_p, _, _ = env.ratios()
    zs = rational_points(env.rng("yamada-mixed"), 4)
    worst_eq, worst_disp = corr.mixed_dde_residual(
        1, env.t, ctx, env.bstar(), rho_p, zs)
    f, g = env.fg()
    gauge = corr.gauge_ratio_residuals(f, g, env.t, rho_p, env.p, zs)
    return [
        CheckRecord("yamada.mixed-relation", "yamada", worst_eq,
                    TOL_COMPOUND, "raw polynomial data"),
        CheckRecord("yamada.mixed-coefficient-displays", "yamada",
                    worst_disp, TOL_COMPOUND),
        CheckRecord("yamada.gauge-ratio-displays", "yamada", gauge,
                    TOL_MAIN),
    ]


def check_yamada_pullback(env):
    p = env.p
    rng = env.rng("yamada-states")
    worst = mpf(0)
    for _ in range(10):
        f, g, g_hat, f_check, t = rational_points(rng, 5, denom_max=40,
                                                  span=4)
        try:
            worst = max(worst, corr.yamada_intro_match(
                f, g, g_hat, f_check, t, p))
        except E6LaxError:
            continue
    return [CheckRecord("yamada.system-pullback", "yamada", worst, TOL_MAIN,
                        "10 seeded off-orbit states")]


def check_yamada_scalar_pullback(env):
    p = env.p
    f, g = env.fg()
    zs = rational_points(env.rng("yamada-pull-z"), 4)
    res = corr.yamada_scalar_pullback_residual(f, g, env.t, p, zs)
    res2 = corr.yamada_mixed_pullback_residual(f, g, env.t, p, zs)
    return [CheckRecord("yamada.scalar-pullback", "yamada", max(res, res2),
                        TOL_MAIN, "both second-order pullbacks")]


REGISTRY = (
    check_weight_ratios,
    check_weight_consistency,
    check_orthogonality,
    check_casoratian,
    check_expansion_coefficients,
    check_spectral_determinant,
    check_spectral_leading,
    check_spectral_quad,
    check_spectral_closed_form,
    check_index_recurrences,
    check_deformation_structure,
    check_deformation_closed_form,
    check_residue_relations,
    check_compatibility,
    check_dynamics,
    check_sakai_matrix,
    check_sakai_deformation,
    check_sakai_dictionary,
    check_yamada_scalar,
    check_yamada_mixed,
    check_yamada_pullback,
    check_yamada_scalar_pullback,
)

GROUPS = ("weight", "ops", "spectral", "recurrence", "deformation",
          "compatibility", "dynamics", "sakai", "yamada")


def run_checks(env, groups=None):
    """Run the registry (optionally restricted to some groups); any module
    error becomes a failed record instead of a crash."""
    records = []
    for fn in REGISTRY:
        try:
            recs = fn(env)
        except E6LaxError as exc:
            records.append(CheckRecord(
                fn.__name__.replace("check_", "error."), "error",
                mpf("inf"), mpf(0), "%s: %s" % (type(exc).__name__, exc)))
            continue
        records.extend(recs)
    if groups is not None:
        wanted = set(groups)
        records = [r for r in records if r.group in wanted]
    return sorted(records, key=lambda r: r.check_id)
