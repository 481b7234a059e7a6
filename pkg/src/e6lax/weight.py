"""The deformed big q-Jacobi weight and its spectral/deformation data.

The weight is the six-factor q-Pochhammer quotient

    w(x;t) = (b2 x, b3 x, x/(b6 t); q)_inf / (b1 x, b4 x, b6 x/t; q)_inf

subject to b1 b2 b3 b4 = 1, with the auxiliary combination
b5 = q^n b1 b4 b6.  Its lattice-shift ratios are fixed rational functions:

    w(qx;t)/w(x;t) = w_plus(x)/w_minus(x)      (spectral direction)
    w(x;qt)/w(x;t) = r_plus(x)/r_minus(x)      (deformation direction)

with the cubic pair

    w_plus  = b6 (1-b1 x)(1-b4 x)(t-b6 x)
    w_minus = (1-b2 x)(1-b3 x)(b6 t-x)

and the linear pair

    r_plus  = (b6 q t - x)/b6
    r_minus = (q t - b6 x).

These four polynomials drive the whole Lax construction.
"""

from mpmath import mp, mpf, mpc

from .algebra import (
    Poly,
    default_tol,
    poly_interpolate,
    relative_residual,
    scalar,
    working_precision,
    DEFAULT_PRECISION,
)
from .errors import FactorVanishes, WeightPole
from .qcalculus import qpochhammer


class Params:
    """Validated parameter set (q, t, b1..b6, n) plus working precision.

    b4 may be supplied explicitly or derived as 1/(b1 b2 b3); b5 is always
    derived as q^n b1 b4 b6.  Construction fails fast on any violated
    constraint; genericity and lattice-regularity are checked up front so
    downstream code never needs to re-validate.
    """

    __slots__ = ("q", "t", "b1", "b2", "b3", "b4", "b5", "b6", "n",
                 "precision", "tol")

    def __init__(self, q, t, b1, b2, b3, b6, n=1, b4=None,
                 precision=DEFAULT_PRECISION, tol=None):
        if precision < 64:
            raise FactorVanishes("precision must be at least 64 bits")
        self.precision = int(precision)
        with working_precision(self.precision):
            self.q = scalar(q)
            self.t = scalar(t)
            self.b1 = scalar(b1)
            self.b2 = scalar(b2)
            self.b3 = scalar(b3)
            self.b6 = scalar(b6)
            self.n = int(n)
            self.tol = scalar(tol) if tol is not None else default_tol(self.precision)
            if b4 is None:
                self.b4 = 1 / (self.b1 * self.b2 * self.b3)
            else:
                self.b4 = scalar(b4)
            self.b5 = self.q ** self.n * self.b1 * self.b4 * self.b6
            self._validate()

    def _validate(self):
        tol = self.tol
        q, b5 = self.q, self.b5
        if self.n < 0:
            raise FactorVanishes("index n must be >= 0")
        if q == 0 or abs(q) >= 1:
            raise FactorVanishes("need 0 < |q| < 1, got q = %s" % q)
        if self.t == 0 or self.b6 == 0:
            raise FactorVanishes("t and b6 must be nonzero")
        prod = self.b1 * self.b2 * self.b3 * self.b4
        if abs(prod - 1) > tol:
            raise FactorVanishes("b1*b2*b3*b4 = %s, must equal 1" % prod)
        for b in (self.b1, self.b2, self.b3, self.b4):
            if b == 0:
                raise FactorVanishes("b parameters must be nonzero")
        sq = mpc(q) ** mpf("0.5")
        for bad, name in ((1, "1"), (-1, "-1"), (sq, "q^(1/2)"), (1 / sq, "q^(-1/2)")):
            if abs(b5 - bad) <= tol or abs(b5 + bad) <= tol and name == "1":
                raise FactorVanishes("b5 = %s hits excluded value %s" % (b5, name))
        self._check_regularity()

    def _check_regularity(self):
        """No two zeros of W^2 - Dy^2 V^2 may be q-linked within |k| <= 64."""
        zeros = [1 / self.b1, 1 / self.b2, 1 / self.b3, 1 / self.b4,
                 self.b6 * self.t, self.t / self.b6]
        for i in range(len(zeros)):
            for j in range(len(zeros)):
                if i == j:
                    continue
                ratio = zeros[i] / zeros[j]
                shift = mpc(1)
                for _ in range(65):
                    if abs(ratio - shift) <= self.tol:
                        raise FactorVanishes(
                            "singular points %s and %s are q-linked"
                            % (zeros[i], zeros[j])
                        )
                    shift *= self.q

    def with_index(self, n):
        """Same weight parameters, different construction index (b5 is
        re-derived)."""
        return Params(self.q, self.t, self.b1, self.b2, self.b3, self.b6,
                      n=n, b4=self.b4, precision=self.precision)

    def bs(self):
        return (self.b1, self.b2, self.b3, self.b4)

    def __repr__(self):
        return ("Params(q=%s, t=%s, b=(%s, %s, %s, %s), b5=%s, b6=%s, n=%d)"
                % (self.q, self.t, self.b1, self.b2, self.b3, self.b4,
                   self.b5, self.b6, self.n))


def default_params(n=1, precision=DEFAULT_PRECISION):
    """The default test instance (rational, generic, pole-free support)."""
    return Params(q="1/2", t="1/3", b1="3/2", b2="4/5", b3="5/7", b6="2/3",
                  n=n, precision=precision)


class SpectralData:
    """Cubic polynomial pair (W + Dy V, W - Dy V)."""

    __slots__ = ("w_plus", "w_minus")

    def __init__(self, w_plus, w_minus):
        self.w_plus = w_plus
        self.w_minus = w_minus

    def w_poly(self):
        return (self.w_plus + self.w_minus) * scalar("1/2")

    def v_poly(self, p):
        """V = (w_plus - w_minus)/(2 (q-1) x)."""
        diff = (self.w_plus - self.w_minus) * (1 / (2 * (p.q - 1)))
        return diff.shift_down(p.tol)


class DeformData:
    """Linear polynomial pair (R + Du S, R - Du S)."""

    __slots__ = ("r_plus", "r_minus")

    def __init__(self, r_plus, r_minus):
        self.r_plus = r_plus
        self.r_minus = r_minus


def weight_eval(x, t, p):
    """The six-factor weight w(x;t) by direct infinite products."""
    x = scalar(x)
    t = scalar(t)
    q = p.q
    num = (
        qpochhammer(p.b2 * x, q)
        * qpochhammer(p.b3 * x, q)
        * qpochhammer(x / (p.b6 * t), q)
    )
    den = (
        qpochhammer(p.b1 * x, q)
        * qpochhammer(p.b4 * x, q)
        * qpochhammer(p.b6 * x / t, q)
    )
    if abs(den) <= mpf(2) ** (-(mp.prec - 8)):
        raise WeightPole("weight pole at x = %s, t = %s" % (x, t))
    return num / den


def spectral_data(p, t=None):
    """Expanded spectral data polynomials at time t (default p.t)."""
    t = p.t if t is None else scalar(t)
    w_plus = Poly([1, -p.b1]) * Poly([1, -p.b4]) * Poly([t, -p.b6]) * p.b6
    w_minus = Poly([1, -p.b2]) * Poly([1, -p.b3]) * Poly([p.b6 * t, -1])
    return SpectralData(w_plus, w_minus)


def deformation_data(p, t=None):
    """Linear deformation data polynomials at time t (default p.t)."""
    t = p.t if t is None else scalar(t)
    r_plus = Poly([p.q * t, -1 / p.b6])
    r_minus = Poly([p.q * t, -p.b6])
    return DeformData(r_plus, r_minus)


def check_wv_rs(p, t, x):
    """Residual of the spectral/deformation compatibility relation: the
    product of the spectral ratio at advanced time with the deformation
    ratio at the base point must equal the product of the spectral ratio at
    base time with the deformation ratio at the advanced spectral point."""
    t = scalar(t)
    x = scalar(x)
    sd_t = spectral_data(p, t)
    sd_qt = spectral_data(p, p.q * t)
    dd = deformation_data(p, t)
    factors = [sd_t.w_minus(x), sd_qt.w_minus(x), dd.r_minus(x),
               dd.r_minus(p.q * x)]
    if any(abs(v) <= p.tol for v in factors):
        raise FactorVanishes("compatibility check at a factor zero")
    lhs = (sd_qt.w_plus(x) / sd_qt.w_minus(x)) * (dd.r_plus(x) / dd.r_minus(x))
    rhs = (sd_t.w_plus(x) / sd_t.w_minus(x)) * (
        dd.r_plus(p.q * x) / dd.r_minus(p.q * x))
    return relative_residual(lhs, rhs)


def chi(x, t, p):
    """Residue quotient chi = (x - q b6 t)(b6 x - q t) / [q (x - b6 t)(b6 x - t)]."""
    x = scalar(x)
    t = scalar(t)
    den = p.q * (x - p.b6 * t) * (p.b6 * x - t)
    if abs(den) <= p.tol:
        raise WeightPole("chi evaluated at a pole, x = %s" % x)
    return (x - p.q * p.b6 * t) * (p.b6 * x - p.q * t) / den


def compute_U(p, t, stieltjes_fn, nodes=None):
    """Inhomogeneous term of the Stieltjes equation as a linear polynomial.

    U(x) = W(x) D_x f - 2 V(x) M_x f, recovered by interpolation from
    off-lattice sample points (with a holdout), where f is the Stieltjes
    transform supplied by the ops module as a callable of (x, t).
    """
    from .qcalculus import ddo, mean_op

    t = scalar(t)
    if nodes is None:
        nodes = interpolation_nodes(4)
    sd = spectral_data(p, t)
    w_poly = sd.w_poly()
    v_poly = sd.v_poly(p)
    samples = []
    for x in nodes:
        x = scalar(x)
        pair = (stieltjes_fn(p.q * x, t), stieltjes_fn(x, t))
        val = w_poly(x) * ddo(pair, x, p.q) - 2 * v_poly(x) * mean_op(pair)
        samples.append((x, val))
    return poly_interpolate(samples, 1, tol=p.tol)


def interpolation_nodes(count, start="17/12", ratio="9/8"):
    """Geometric off-lattice sample points x_j = x0 * r^j.

    The default x0 = 17/12 keeps every node off the support lattice of the
    default instance for all j (the factor 17 never appears in lattice
    denominators).
    """
    x0 = scalar(start)
    r = scalar(ratio)
    return [x0 * r ** j for j in range(count)]
