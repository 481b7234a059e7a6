"""Exception types raised by the verification toolkit.

Every guard condition in the numerical pipeline raises a distinct
exception class so that callers (and the CLI) can tell a configuration
problem apart from a genuine numerical failure.
"""


class E6LaxError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(E6LaxError):
    """Malformed or inconsistent run configuration."""


# --- polynomial / linear-algebra layer ---

class DuplicateNode(E6LaxError):
    """Interpolation nodes are not pairwise distinct."""


class ZeroNode(E6LaxError):
    """An interpolation node that must be nonzero is zero."""


class HoldoutMismatch(E6LaxError):
    """Interpolant fails to reproduce a held-out sample, i.e. the data
    is not a polynomial of the assumed degree."""


class SingularMatrix(E6LaxError):
    """2x2 matrix inversion attempted on a (numerically) singular matrix."""


class ProfileMismatch(E6LaxError):
    """A matrix entry does not have the expected polynomial degree."""


class DenominatorZero(E6LaxError):
    """Rational-function evaluation at (numerically) a pole."""


PoleHit = DenominatorZero


# --- q-lattice layer ---

class DegenerateBase(E6LaxError):
    """q is 0, 1, or a root of unity; the q-lattice degenerates."""


class DivergentBase(E6LaxError):
    """|q| >= 1 where an infinite product/sum requires |q| < 1."""


class ZeroArgument(E6LaxError):
    """Zero passed where a nonzero argument is required (e.g. theta)."""


class NonFiniteIntegrand(E6LaxError):
    """Integrand evaluated to a non-finite value on the summation lattice."""


# --- weight / orthogonality layer ---

class WeightPole(E6LaxError):
    """Weight evaluated at a pole of its defining product."""


class FactorVanishes(E6LaxError):
    """A genericity constraint on the parameters fails (a factor that
    must be nonzero vanishes, or two singular points are q-linked)."""


class DegenerateHankel(E6LaxError):
    """A Hankel determinant of the moment sequence is (numerically) zero,
    so the orthogonal-polynomial family does not exist at this index."""


class IndexOutOfRange(E6LaxError):
    """Requested polynomial index exceeds the precomputed table."""


class OnSupportLattice(E6LaxError):
    """Evaluation point collides with the q-summation lattice."""


class WeightZero(E6LaxError):
    """Weight vanishes where a division by it is required."""


class SingularY(E6LaxError):
    """Fundamental 2x2 solution matrix is singular at a sample point."""


# --- Lax / evolution layer ---

class ExcludedValue(E6LaxError):
    """Closed-form expression evaluated on its excluded locus."""


class ZeroLambda(E6LaxError):
    """Off-diagonal entry has no nonzero root (degenerate extraction)."""


class SingularConfiguration(E6LaxError):
    """A correspondence construction hit a degenerate configuration."""


class SingularStep(E6LaxError):
    """Evolution step would divide by zero (orbit hit a singularity)."""


class ZeroTheta(E6LaxError):
    """Theta-function quotient requested at a lattice zero."""
