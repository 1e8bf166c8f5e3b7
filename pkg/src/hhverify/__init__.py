"""Numerical verification of Hermite-Hadamard type trapezoid bounds for
functions whose second derivative, in absolute value to the power q, is
(alpha, m)-convex."""

__version__ = "0.1.0"
