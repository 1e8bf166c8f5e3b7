"""Built-in test functions with closed-form second derivatives.

All evaluators accept floats or numpy arrays. Domains are [0, 2].
"""

import numpy as np

from .bounds import FunctionSpec

B_STAR = 2.0


def _power_family(alpha):
    k = alpha + 2.0
    c = k * (k - 1.0)
    return FunctionSpec(
        id=f"power_{k:g}",
        f=lambda x: np.power(x, k),
        f2=lambda x: c * np.power(x, alpha),
        b_star=B_STAR,
        description=f"x^{k:g}, f'' = {c:g} x^{alpha:g}",
    )


def builtin_corpus():
    """Return the built-in function corpus as a list, in a fixed order."""
    return [
        FunctionSpec("linear", lambda x: 1.0 * x, lambda x: 0.0 * x, B_STAR,
                     "x, f'' = 0"),
        FunctionSpec("quadratic", lambda x: x * x, lambda x: 2.0 + 0.0 * x, B_STAR,
                     "x^2, f'' = 2"),
        FunctionSpec("cubic", lambda x: x ** 3, lambda x: 6.0 * x, B_STAR,
                     "x^3, f'' = 6x"),
        FunctionSpec("quartic", lambda x: x ** 4, lambda x: 12.0 * x * x, B_STAR,
                     "x^4, f'' = 12x^2"),
        FunctionSpec("exp", np.exp, np.exp, B_STAR, "e^x, f'' = e^x"),
        _power_family(0.25),
        _power_family(0.5),
        _power_family(0.75),
    ]


def corpus_by_id(corpus=None):
    if corpus is None:
        corpus = builtin_corpus()
    return {spec.id: spec for spec in corpus}


def central_second_difference(f, x, h=1e-5):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def derivative_residual(fspec, n=41, h=1e-5):
    """Worst normalized gap between f2 and a central second difference of f.

    Normalized as ``|f2 - fd| / (1 + |f2|)`` on an interior grid of
    [0, b_star] kept at least 0.05 away from 0 so ``x - h`` stays in domain.
    """
    xs = np.linspace(0.05, fspec.b_star, n)
    f2 = np.asarray(fspec.f2(xs), dtype=float)
    fd = central_second_difference(fspec.f, xs, h)
    return float(np.max(np.abs(f2 - fd) / (1.0 + np.abs(f2))))
