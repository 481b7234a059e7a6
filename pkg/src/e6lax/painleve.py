"""The coupled first-order evolution for the pair (f, g) over the
geometric time lattice, together with the induced first-order equation
for the squared leading-coefficient ratio.

The pair evolves by the two coupled relations

    (f g - 1)(f g^ - 1) = q t^2 prod_j (f - b_j) / ((f - b5 q t)(f - t/b5)),
    (f g - 1)(f' g - 1) = t^2 prod_j (b_j g - 1) / ((g - b6 t)(g - t/b6)),

where g^ = g(qt) and f' = f(t/q); stepping forward solves the first for
g^ and then the second (advanced one tick) for f(qt), and stepping
backward does the reverse.
"""

from mpmath import mp, mpf, mpc

from .algebra import relative_residual, scalar
from .errors import SingularStep


class PainleveState:
    """A point (f, g) at time t on the q-lattice of times."""

    __slots__ = ("f", "g", "t")

    def __init__(self, f, g, t):
        self.f = scalar(f)
        self.g = scalar(g)
        self.t = scalar(t)

    def __repr__(self):
        return "PainleveState(f=%s, g=%s, t=%s)" % (self.f, self.g, self.t)


def _singular_floor(p):
    return mpf(10) ** 6 * p.tol


def rhs_first(g, t, p, form="product"):
    """Right side t^2 prod_j (b_j g - 1) / ((g - b6 t)(g - t/b6)) of the
    g-equation; ``form='expanded'`` multiplies out the quartic numerator
    as an independent evaluation route."""
    g, t = scalar(g), scalar(t)
    den = (g - p.b6 * t) * (g - t / p.b6)
    if abs(den) <= _singular_floor(p):
        raise SingularStep("g at a pole of the first evolution map")
    if form == "product":
        num = mpc(1)
        for b in p.bs():
            num *= b * g - 1
    elif form == "expanded":
        b1, b2, b3, b4 = p.bs()
        e1 = b1 + b2 + b3 + b4
        e2 = (b1 * b2 + b1 * b3 + b1 * b4 + b2 * b3 + b2 * b4 + b3 * b4)
        e3 = (b1 * b2 * b3 + b1 * b2 * b4 + b1 * b3 * b4 + b2 * b3 * b4)
        e4 = b1 * b2 * b3 * b4
        num = (e4 * g ** 4 - e3 * g ** 3 + e2 * g ** 2 - e1 * g + 1)
    else:
        raise ValueError("form must be 'product' or 'expanded'")
    return t ** 2 * num / den


def rhs_second(f, t, p):
    """Right side q t^2 prod_j (f - b_j) / ((f - b5 q t)(f - t/b5)) of the
    f-equation."""
    f, t = scalar(f), scalar(t)
    den = (f - p.b5 * p.q * t) * (f - t / p.b5)
    if abs(den) <= _singular_floor(p):
        raise SingularStep("f at a pole of the second evolution map")
    num = mpc(1)
    for b in p.bs():
        num *= f - b
    return p.q * t ** 2 * num / den


def evolution_residuals(state, state_next, p):
    """Relative residuals of the two coupled relations across one forward
    tick: state at t, state_next at qt."""
    f, g, t = state.f, state.g, state.t
    f_hat, g_hat = state_next.f, state_next.g
    r1 = relative_residual((f * g_hat - 1) * (f_hat * g_hat - 1),
                           rhs_first(g_hat, p.q * t, p))
    r2 = relative_residual((f * g - 1) * (f * g_hat - 1),
                           rhs_second(f, t, p))
    return r1, r2


def step_forward(state, p):
    """One tick t -> qt: solve the f-equation for g^, then the g-equation
    (at time qt) for f^."""
    f, g, t = state.f, state.g, state.t
    base = f * g - 1
    if abs(base) <= _singular_floor(p) or abs(f) <= _singular_floor(p):
        raise SingularStep("forward step through f g = 1 or f = 0")
    g_hat = (1 + rhs_second(f, t, p) / base) / f
    base2 = g_hat * f - 1
    if abs(base2) <= _singular_floor(p) or abs(g_hat) <= _singular_floor(p):
        raise SingularStep("forward step produced a singular g^")
    f_hat = (1 + rhs_first(g_hat, p.q * t, p) / base2) / g_hat
    return PainleveState(f_hat, g_hat, p.q * t)


def step_backward(state, p):
    """One tick t -> t/q: solve the g-equation for f', then the f-equation
    (at time t/q) for g'."""
    f, g, t = state.f, state.g, state.t
    base = g * f - 1
    if abs(base) <= _singular_floor(p) or abs(g) <= _singular_floor(p):
        raise SingularStep("backward step through f g = 1 or g = 0")
    f_prev = (1 + rhs_first(g, t, p) / base) / g
    base2 = f_prev * g - 1
    if abs(base2) <= _singular_floor(p) or abs(f_prev) <= _singular_floor(p):
        raise SingularStep("backward step produced a singular f'")
    g_prev = (1 + rhs_second(f_prev, t / p.q, p) / base2) / f_prev
    return PainleveState(f_prev, g_prev, t / p.q)


def orbit(state, p, steps):
    """Forward orbit [state, T(state), ..., T^steps(state)] (steps may be
    negative for the backward orbit)."""
    out = [state]
    cur = state
    if steps >= 0:
        for _ in range(steps):
            cur = step_forward(cur, p)
            out.append(cur)
    else:
        for _ in range(-steps):
            cur = step_backward(cur, p)
            out.append(cur)
    return out


def roundtrip_residual(state, p, steps=1):
    """Max component-wise relative error of stepping forward ``steps``
    ticks and back again."""
    fwd = orbit(state, p, steps)[-1]
    back = orbit(fwd, p, -steps)[-1]
    return max(relative_residual(back.f, state.f),
               relative_residual(back.g, state.g))


def gamma_ratio_sq(state, p):
    """The squared leading-coefficient ratio
    (gamma^_n / (b6 gamma_n))^2 = (f - t/b5)/(f - b5 q t)."""
    f, t = state.f, state.t
    den = f - p.b5 * p.q * t
    if abs(den) <= _singular_floor(p):
        raise SingularStep("gamma-ratio pole f = b5 q t")
    return (f - t / p.b5) / den
