"""High-precision complex scalars, dense polynomials, rational functions
and 2x2 matrices.

Everything downstream computes in these types.  Scalars are mpmath
``mpf``/``mpc`` values; the working precision is managed explicitly by the
caller through :func:`working_precision` (entry points of other modules wrap
themselves in it).  All containers are immutable and all operations are pure,
so values can be shared freely between threads.
"""

from fractions import Fraction

from mpmath import mp, mpf, mpc, workprec

from .errors import (
    DuplicateNode,
    HoldoutMismatch,
    ProfileMismatch,
    SingularMatrix,
    DenominatorZero,
)

DEFAULT_PRECISION = 256


def working_precision(bits):
    """Context manager setting the mpmath binary precision.

    A small guard margin is added so that the last few bits of results at
    the nominal precision are trustworthy.
    """
    return workprec(bits + 8)


def default_tol(precision=DEFAULT_PRECISION):
    """Default comparison tolerance: 2^(-precision/2)."""
    return mpf(2) ** (-(precision // 2))


def scalar(value):
    """Convert ints, Fractions, strings like "3/4", floats and mpmath
    numbers to an mpf/mpc at the current working precision."""
    if isinstance(value, (mpf, mpc)):
        return value
    if isinstance(value, complex):
        return mpc(value.real, value.imag)
    if isinstance(value, Fraction):
        return mpf(value.numerator) / mpf(value.denominator)
    if isinstance(value, str) and "/" in value:
        num, den = value.split("/")
        return mpf(num.strip()) / mpf(den.strip())
    return mpf(value)


def fabs(z):
    return abs(mpc(z))


def relative_residual(lhs, rhs):
    """|lhs - rhs| scaled by max(1, |lhs|, |rhs|)."""
    lhs = mpc(lhs)
    rhs = mpc(rhs)
    scale = max(mpf(1), abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [scalar(c) for c in coeffs]
        # strip exactly-zero leading coefficients
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [mpf(0)]
        self.coeffs = tuple(coeffs)

    # -- construction helpers -------------------------------------------

    @classmethod
    def zero(cls):
        return cls([0])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots, leading=1):
        p = cls([leading])
        for r in roots:
            p = p * cls([-scalar(r), 1])
        return p

    # -- basic queries ---------------------------------------------------

    def degree(self):
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def is_zero(self, tol=None):
        if tol is None:
            return self.degree() == -1
        return all(abs(c) <= tol for c in self.coeffs)

    def __call__(self, x):
        x = scalar(x)
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return mpf(0)

    def max_coeff(self):
        return max(abs(c) for c in self.coeffs)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = scalar(other)
            return Poly([a * c for a in self.coeffs])
        out = [mpc(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def shift_down(self, tol):
        """Divide by x, requiring the constant term to be negligible."""
        scale = max(mpf(1), self.max_coeff())
        if abs(self.coeffs[0]) > tol * scale:
            raise ProfileMismatch(
                "constant term %s not negligible; cannot divide by x" % self.coeffs[0]
            )
        if len(self.coeffs) == 1:
            return Poly.zero()
        return Poly(self.coeffs[1:])

    def scale_argument(self, c):
        """Return p(c*x)."""
        c = scalar(c)
        out, pw = [], mpf(1)
        for a in self.coeffs:
            out.append(a * pw)
            pw = pw * c
        return Poly(out)

    def trimmed(self, tol):
        """Drop trailing coefficients below ``tol * max|coeff|``."""
        scale = max(mpf(1), self.max_coeff())
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and abs(coeffs[-1]) <= tol * scale:
            coeffs.pop()
        return Poly(coeffs)

    def __repr__(self):
        return "Poly(%s)" % (list(self.coeffs),)


def _as_poly(v):
    return v if isinstance(v, Poly) else Poly([scalar(v)])


class RatFun:
    """Quotient of two polynomials.  No gcd reduction is attempted; degrees
    stay small enough in this artifact that it is never needed."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.degree() == -1:
            raise DenominatorZero("rational function with zero denominator")
        self.num = num
        self.den = den

    def __call__(self, x, tol=None):
        d = self.den(x)
        guard = tol if tol is not None else mpf(0)
        if abs(d) <= guard:
            raise DenominatorZero("evaluation at a pole: den(%s) = %s" % (x, d))
        return self.num(x) / d

    def __add__(self, other):
        other = _as_ratfun(other)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfun(other))

    def __rsub__(self, other):
        return _as_ratfun(other) + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __repr__(self):
        return "RatFun(%r, %r)" % (self.num, self.den)


def _as_ratfun(v):
    if isinstance(v, RatFun):
        return v
    return RatFun(_as_poly(v), Poly([1]))


class Mat2:
    """Immutable 2x2 matrix of scalars."""

    __slots__ = ("e11", "e12", "e21", "e22")

    def __init__(self, e11, e12, e21, e22):
        self.e11 = scalar(e11)
        self.e12 = scalar(e12)
        self.e21 = scalar(e21)
        self.e22 = scalar(e22)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.e11 * other.e11 + self.e12 * other.e21,
                self.e11 * other.e12 + self.e12 * other.e22,
                self.e21 * other.e11 + self.e22 * other.e21,
                self.e21 * other.e12 + self.e22 * other.e22,
            )
        c = scalar(other)
        return Mat2(self.e11 * c, self.e12 * c, self.e21 * c, self.e22 * c)

    __rmul__ = __mul__

    def __add__(self, other):
        return Mat2(
            self.e11 + other.e11,
            self.e12 + other.e12,
            self.e21 + other.e21,
            self.e22 + other.e22,
        )

    def __sub__(self, other):
        return Mat2(
            self.e11 - other.e11,
            self.e12 - other.e12,
            self.e21 - other.e21,
            self.e22 - other.e22,
        )

    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)

    def norm(self):
        return max(abs(e) for e in self.entries())

    def __repr__(self):
        return "Mat2(%s, %s, %s, %s)" % self.entries()


def mat2_inv(m, tol=None):
    """Inverse of a 2x2 scalar matrix.

    Raises SingularMatrix when |det| falls at or below the degeneracy
    threshold (default 2^(-precision/2) at the current working precision).
    """
    if tol is None:
        tol = default_tol(mp.prec)
    d = m.det()
    if abs(d) <= tol * max(mpf(1), m.norm() ** 2):
        raise SingularMatrix("matrix determinant %s below threshold" % d)
    return Mat2(m.e22 / d, -m.e12 / d, -m.e21 / d, m.e11 / d)


def poly_interpolate(samples, degree_bound, tol=None):
    """Unique polynomial of degree <= degree_bound through the first
    degree_bound+1 samples; remaining samples are holdouts.

    samples: list of (x, y) pairs with pairwise-distinct x, length at least
    degree_bound + 2.  Holdout residuals above tolerance raise
    HoldoutMismatch, signalling that the data is not a polynomial of the
    claimed degree.
    """
    if tol is None:
        tol = default_tol(mp.prec)
    if len(samples) < degree_bound + 2:
        raise ValueError(
            "need at least %d samples for degree bound %d, got %d"
            % (degree_bound + 2, degree_bound, len(samples))
        )
    xs = [scalar(x) for x, _ in samples]
    ys = [scalar(y) for _, y in samples]
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[i] == xs[j]:
                raise DuplicateNode("repeated interpolation node %s" % xs[i])

    m = degree_bound + 1
    # Newton divided differences on the first m nodes.
    table = list(ys[:m])
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    # convert Newton form to monomial coefficients
    coeffs = [mpc(0)] * m
    for k in range(m - 1, -1, -1):
        # multiply current poly by (x - xs[k]) and add table[k]
        shifted = [mpc(0)] + coeffs[:-1]
        coeffs = [s - xs[k] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += table[k]
    poly = Poly(coeffs)

    yscale = max([mpf(1)] + [abs(y) for y in ys])
    for xh, yh in zip(xs[m:], ys[m:]):
        resid = abs(poly(xh) - yh)
        if resid > tol * yscale:
            raise HoldoutMismatch(
                "holdout residual %s at x=%s exceeds %s (degree bound %d wrong?)"
                % (resid, xh, tol * yscale, degree_bound)
            )
    return poly.trimmed(tol)


def poly_root_of_linear_factor(p, tol=None):
    """Extract lambda from a polynomial of profile c*x*(x - lambda)
    (degree 2, negligible constant term) or c*(x - lambda) (degree 1)."""
    if tol is None:
        tol = default_tol(mp.prec)
    p = p.trimmed(tol)
    deg = p.degree()
    scale = max(mpf(1), p.max_coeff())
    if deg == 2:
        if abs(p.coeff(0)) > tol * scale:
            raise ProfileMismatch(
                "quadratic with non-negligible constant term %s" % p.coeff(0)
            )
        return -p.coeff(1) / p.coeff(2)
    if deg == 1:
        return -p.coeff(0) / p.coeff(1)
    raise ProfileMismatch("degree %d polynomial has no x(x-root) profile" % deg)
