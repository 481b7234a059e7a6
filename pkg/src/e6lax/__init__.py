"""High-precision verification toolkit for a 2x2 q-difference Lax pair
built from a deformed basic hypergeometric orthogonal polynomial family,
together with the coupled first-order evolution it generates and bridges
to two previously published formulations of the same system."""

__version__ = "0.1.0"
