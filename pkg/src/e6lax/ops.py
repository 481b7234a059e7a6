"""Orthogonal polynomial system for the deformed weight.

Moments are Thomae-Jackson q-integrals of x^k w(x;t) between the two
numerator zeros 1/b2 and 1/b3 of the weight; with those terminals every
boundary term of the semi-classical structure drops and no pole of the
weight lands on the summation lattice (checked at construction).

Recurrence coefficients come from Hankel determinants of the moment
sequence in the orthonormal normalization h_n = 1:

    gamma_n = sqrt(Delta_n / Delta_{n+1}),   a_n = gamma_{n-1}/gamma_n,
    b_n = Delta'_{n+1}/Delta_{n+1} - Delta'_n/Delta_n,

where Delta_n is the n x n Hankel determinant (Delta_0 = 1) and Delta'_n
the same determinant with the last row advanced one moment.  The weight is
not positive on the support lattice, so Hankel ratios may be negative and
gamma_n complex; square roots take the principal branch throughout, and
every downstream identity that depends on the branch is checked on squares
or on branch-consistent ratios.

The index -1 initial data of the associated-function recurrence requires a
value for a_0, which multiplies only p_{-1} = 0 and is therefore a free
convention; a_0 = 1 is used.
"""

from mpmath import mp, mpf, mpc, sqrt, matrix, det

from .algebra import Mat2, default_tol, scalar, working_precision
from .errors import (
    DegenerateHankel,
    IndexOutOfRange,
    NonFiniteIntegrand,
    OnSupportLattice,
    WeightPole,
    WeightZero,
)
from .weight import spectral_data, weight_eval


class SupportSpec:
    """Integration support: terminals at the weight's numerator zeros."""

    __slots__ = ("upper_terminal", "lower_terminal", "truncation")

    def __init__(self, p, truncation=200):
        self.upper_terminal = 1 / p.b2
        self.lower_terminal = 1 / p.b3
        self.truncation = int(truncation)
        if self.truncation < 32:
            raise ValueError("truncation depth must be >= 32")


class SupportTable:
    """Weight values cached on the two lattice half-lines at a fixed time.

    The table is seeded by two direct q-Pochhammer evaluations at s = 1 and
    propagated down each half-line with the exact semi-classical ratio
    w(q y) = w(y) * w_plus(y)/w_minus(y); the terminals themselves carry
    w = 0 exactly (a numerator factor (1;q)_inf).  ``spot_check`` compares
    cached values against direct evaluation.
    """

    __slots__ = ("t", "spec", "points_upper", "points_lower",
                 "w_upper", "w_lower", "q")

    def __init__(self, p, t, spec):
        self.t = scalar(t)
        self.spec = spec
        self.q = p.q
        sd = spectral_data(p, self.t)
        self.points_upper, self.w_upper = self._half_line(
            p, sd, spec.upper_terminal)
        self.points_lower, self.w_lower = self._half_line(
            p, sd, spec.lower_terminal)

    def _half_line(self, p, sd, terminal):
        S = self.spec.truncation
        points = []
        y = scalar(terminal)
        for _ in range(S + 1):
            points.append(y)
            y = self.q * y
        ws = [mpc(0)] * (S + 1)
        ws[1] = weight_eval(points[1], self.t, p)
        for s in range(1, S):
            denom = sd.w_minus(points[s])
            if denom == 0:
                raise WeightPole("weight pole on support lattice at %s"
                                 % points[s])
            ws[s + 1] = ws[s] * sd.w_plus(points[s]) / denom
        return points, ws

    def integrate(self, fn):
        """Thomae-Jackson sum of fn(y, w(y)) dq y over the support.

        fn receives the lattice point and the cached weight there; terms are
        summed in ascending s for reproducibility.  Returns (value,
        tail_bound).
        """
        d = self.points_upper[0]
        c = self.points_lower[0]
        total = mpc(0)
        qs = mpc(1)
        max_term = mpf(0)
        for s in range(self.spec.truncation + 1):
            fd = mpc(fn(self.points_upper[s], self.w_upper[s]))
            fc = mpc(fn(self.points_lower[s], self.w_lower[s]))
            if not (mp.isfinite(fd) and mp.isfinite(fc)):
                raise NonFiniteIntegrand("non-finite integrand at s = %d" % s)
            term = qs * (d * fd - c * fc)
            max_term = max(max_term, abs(term))
            total += term
            qs *= self.q
        return (1 - self.q) * total, abs(self.q) ** (self.spec.truncation + 1) * max_term

    def min_distance(self, x):
        x = scalar(x)
        return min(
            min(abs(x - y) for y in self.points_upper),
            min(abs(x - y) for y in self.points_lower),
        )

    def spot_check(self, p, indices=(1, 2, 5, 17, 40)):
        """Max relative deviation of cached weights from direct evaluation."""
        worst = mpf(0)
        for s in indices:
            for pts, ws in ((self.points_upper, self.w_upper),
                            (self.points_lower, self.w_lower)):
                direct = weight_eval(pts[s], self.t, p)
                worst = max(worst, abs(ws[s] - direct) / max(mpf(1), abs(direct)))
        return worst


class OPSData:
    """Moments and three-term recurrence data at a fixed time.

    Lists are indexed naturally: a[n] is a_n for n = 0..N (a[0] = 1 by
    convention), b[n] is b_n for n = 0..N-1, gamma[n] for n = 0..N.
    Orthonormal normalization, so every h_n = 1.
    """

    __slots__ = ("t", "moments", "a", "b", "gamma", "N", "tail_bound")

    def __init__(self, t, moments, a, b, gamma, N, tail_bound):
        self.t = t
        self.moments = tuple(moments)
        self.a = tuple(a)
        self.b = tuple(b)
        self.gamma = tuple(gamma)
        self.N = N
        self.tail_bound = tail_bound


def moments(p, t, kmax, table):
    """Moments m_k = int x^k w(x;t) dq x for k = 0..kmax."""
    out = []
    worst_tail = mpf(0)
    for k in range(kmax + 1):
        val, tail = table.integrate(lambda y, w, k=k: (y ** k) * w)
        out.append(val)
        worst_tail = max(worst_tail, tail)
    return out, worst_tail


def _hankel(ms, n, shifted=False):
    """n x n Hankel determinant of the moment list; ``shifted`` advances
    the last row by one moment."""
    if n == 0:
        return mpf(0) if shifted else mpf(1)
    m = matrix(n, n)
    for i in range(n):
        for j in range(n):
            k = i + j
            if shifted and i == n - 1:
                k += 1
            m[i, j] = ms[k]
    return det(m)


def recurrence_from_moments(ms, t, N, tail_bound=mpf(0), tol=None):
    """Build OPSData from a moment list (needs moments up to 2N)."""
    if tol is None:
        tol = default_tol(mp.prec)
    if len(ms) < 2 * N + 1:
        raise IndexOutOfRange("need moments to k = %d for N = %d" % (2 * N, N))
    deltas = [_hankel(ms, n) for n in range(N + 2)]
    scale = max([mpf(1)] + [abs(m) for m in ms])
    # Hankel determinants of this weight decay like q^(n^2); smallness is
    # expected, so degeneracy is judged against the cancellation floor of
    # the arithmetic (entries^n times a generous precision margin), not
    # against the generic tolerance.
    floor = mpf(2) ** (-(mp.prec - 48))
    for n in range(1, N + 2):
        if abs(deltas[n]) <= floor * scale ** n:
            raise DegenerateHankel("Hankel determinant Delta_%d ~ 0" % n)
    shifted = [_hankel(ms, n, shifted=True) for n in range(N + 2)]
    gamma = [sqrt(mpc(deltas[n] / deltas[n + 1])) for n in range(N + 1)]
    a = [mpf(1)] + [gamma[n - 1] / gamma[n] for n in range(1, N + 1)]
    b = [shifted[n + 1] / deltas[n + 1] - shifted[n] / deltas[n]
         for n in range(N)]
    return OPSData(t, ms, a, b, gamma, N, tail_bound)


def eval_p(n, x, d):
    """Orthonormal polynomial p_n(x) by forward recurrence."""
    if n > d.N or n < -1:
        raise IndexOutOfRange("p_%d beyond table (N = %d)" % (n, d.N))
    x = scalar(x)
    p_prev = mpc(0)          # p_{-1}
    p_cur = mpc(d.gamma[0])  # p_0
    if n == -1:
        return p_prev
    for k in range(n):
        p_next = ((x - d.b[k]) * p_cur - d.a[k] * p_prev) / d.a[k + 1]
        p_prev, p_cur = p_cur, p_next
    return p_cur


class OPSContext:
    """Caches support tables, recurrence data and Stieltjes values across
    the handful of times (t, qt, q^2 t, ...) a verification run touches.

    Times are keyed by their exact binary value, so t and q*(t/q) collide
    correctly.
    """

    def __init__(self, p, N=6, truncation=200):
        self.p = p
        self.N = N
        self.spec = SupportSpec(p, truncation)
        self._tables = {}
        self._data = {}
        self._stieltjes = {}

    def table(self, t):
        t = scalar(t)
        key = mpc(t)
        if key not in self._tables:
            self._tables[key] = SupportTable(self.p, t, self.spec)
        return self._tables[key]

    def data(self, t):
        t = scalar(t)
        key = mpc(t)
        if key not in self._data:
            ms, tail = moments(self.p, t, 2 * self.N + 2, self.table(t))
            self._data[key] = recurrence_from_moments(
                ms, t, self.N, tail, tol=self.p.tol)
        return self._data[key]

    # -- pointwise evaluators -------------------------------------------

    def _guard_off_lattice(self, x, table):
        if table.min_distance(x) <= self.p.tol:
            raise OnSupportLattice("x = %s collides with the support lattice" % x)

    def stieltjes(self, x, t):
        """Stieltjes transform f(x) = int w(y)/(x-y) dq y."""
        x = scalar(x)
        t = scalar(t)
        key = (mpc(t), mpc(x))
        if key not in self._stieltjes:
            table = self.table(t)
            self._guard_off_lattice(x, table)
            val, _ = table.integrate(lambda y, w: w / (x - y))
            self._stieltjes[key] = val
        return self._stieltjes[key]

    def eval_p(self, n, x, t):
        return eval_p(n, x, self.data(t))

    def eval_q(self, n, x, t):
        """Associated function q_n(x) by the same recurrence, seeded with
        q_{-1} = 1/(a_0 gamma_0) and q_0 = gamma_0 f(x)."""
        d = self.data(t)
        if n > d.N or n < -1:
            raise IndexOutOfRange("q_%d beyond table (N = %d)" % (n, d.N))
        x = scalar(x)
        q_prev = 1 / (d.a[0] * d.gamma[0])
        if n == -1:
            return q_prev
        q_cur = d.gamma[0] * self.stieltjes(x, t)
        for k in range(n):
            q_next = ((x - d.b[k]) * q_cur - d.a[k] * q_prev) / d.a[k + 1]
            q_prev, q_cur = q_cur, q_next
        return q_cur

    def eval_q_direct(self, n, x, t):
        """q_n by direct integration of w p_n / (x - y); slow oracle used
        to validate the recurrence route for small n."""
        x = scalar(x)
        table = self.table(t)
        self._guard_off_lattice(x, table)
        d = self.data(t)
        val, _ = table.integrate(lambda y, w: w * eval_p(n, y, d) / (x - y))
        return val

    def weight(self, x, t):
        return weight_eval(x, t, self.p)

    def y_matrix(self, n, x, t):
        """Fundamental matrix with rows (p_n, q_n/w), (p_{n-1}, q_{n-1}/w)."""
        x = scalar(x)
        t = scalar(t)
        w = self.weight(x, t)
        if abs(w) <= self.p.tol:
            raise WeightZero("weight vanishes at x = %s" % x)
        return Mat2(
            self.eval_p(n, x, t), self.eval_q(n, x, t) / w,
            self.eval_p(n - 1, x, t), self.eval_q(n - 1, x, t) / w,
        )
