"""Grid-sampled falsification check for (alpha, m)-convexity.

A function g on [0, b] is (alpha, m)-convex when, for all x, y in [0, b]
and t in [0, 1],

    g(t*x + m*(1 - t)*y) <= t**alpha * g(x) + m*(1 - t**alpha) * g(y).

:func:`check_am_convex` samples that inequality on a regular grid. A
passing verdict only means no sampled triple violated it.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import EvaluationError, ParameterError

DEFAULT_GRID_N = 50
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class AMParams:
    """The (alpha, m, q) triple. ``m = 0`` is accepted for definition checks only."""

    alpha: float
    m: float
    q: float = 1.0

    def __post_init__(self):
        bad = []
        if not 0.0 <= self.alpha <= 1.0:
            bad.append(f"alpha={self.alpha!r} not in [0, 1]")
        if not 0.0 <= self.m <= 1.0:
            bad.append(f"m={self.m!r} not in [0, 1]")
        if not (self.q >= 1.0 and math.isfinite(self.q)):
            bad.append(f"q={self.q!r} must be finite and >= 1")
        if bad:
            raise ParameterError("; ".join(bad))

    @property
    def p(self):
        """Hoelder conjugate q/(q-1); infinite at q = 1."""
        if self.q == 1.0:
            return math.inf
        return self.q / (self.q - 1.0)


@dataclass(frozen=True)
class ConvexityVerdict:
    holds: bool
    witness: Optional[Tuple[float, float, float]]
    margin: float


def _t_pow(t, alpha):
    # numpy already gives 0.0**0.0 == 1.0, which is the value the alpha = 0
    # class (increasing functions) needs at t = 0
    return np.power(t, alpha)


def _apply(g, x):
    """Evaluate ``g`` elementwise, accepting scalar-only callables too."""
    x = np.asarray(x, dtype=float)
    try:
        out = np.asarray(g(x), dtype=float)
        if out.shape == x.shape:
            return out
        if out.shape == ():
            return np.full(x.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda v: float(g(float(v))), otypes=[float])(x)


def _require_finite(values, points, what):
    bad = ~np.isfinite(values)
    if bad.any():
        idx = np.flatnonzero(bad.ravel())[0]
        x = float(np.asarray(points).ravel()[idx])
        raise EvaluationError(f"{what} is not finite at x={x!r}", abscissa=x)


def definition_gap(g, params, x, y, t):
    """g(t x + m(1-t) y) - [t^alpha g(x) + m (1 - t^alpha) g(y)] at one triple."""
    m = params.m
    ta = float(_t_pow(t, params.alpha))
    lhs = float(g(t * x + m * (1.0 - t) * y))
    rhs = ta * float(g(x)) + m * (1.0 - ta) * float(g(y))
    return lhs - rhs


def check_am_convex(g, params, b_star, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Search a ``grid_n**3`` grid of (x, y, t) for a definition violation.

    x and y range over ``[0, b_star]`` and t over ``[0, 1]``, endpoints
    included. The returned margin is the largest sampled gap; when it exceeds
    ``tol`` the verdict fails and the witness is the first triple (in
    x, y, t index order) attaining it.
    """
    if not b_star > 0.0:
        raise ParameterError(f"b_star must be positive, got {b_star!r}")
    if grid_n < 3:
        raise ParameterError(f"grid_n must be >= 3, got {grid_n!r}")
    if not tol >= 0.0:
        raise ParameterError(f"tol must be non-negative, got {tol!r}")
    m = params.m
    xs = np.linspace(0.0, b_star, grid_n)
    ts = np.linspace(0.0, 1.0, grid_n)
    gx = _apply(g, xs)
    _require_finite(gx, xs, "g")

    X = xs[:, None, None]
    Y = xs[None, :, None]
    T = ts[None, None, :]
    Z = T * X + m * (1.0 - T) * Y
    gz = _apply(g, Z)
    _require_finite(gz, Z, "g")
    ta = _t_pow(ts, params.alpha)[None, None, :]
    rhs = ta * gx[:, None, None] + m * (1.0 - ta) * gx[None, :, None]
    gap = gz - rhs

    flat = int(np.argmax(gap))
    worst = float(gap.ravel()[flat])
    if worst > tol:
        i, j, k = np.unravel_index(flat, gap.shape)
        return ConvexityVerdict(False, (float(xs[i]), float(xs[j]), float(ts[k])), worst)
    return ConvexityVerdict(True, None, worst)


def abs_f2_power(fspec, q):
    """Return ``x -> |f''(x)|**q`` for a function spec."""
    f2 = fspec.f2
    return lambda x: np.power(np.abs(f2(x)), q)


def check_abs_f2_q(fspec, params, b_star=None, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Check the bound hypothesis: ``|f''|**q`` is (alpha, m)-convex on [0, b_star]."""
    if b_star is None:
        b_star = fspec.b_star
    return check_am_convex(abs_f2_power(fspec, params.q), params, b_star, grid_n, tol)


_CLASS_LABELS = {
    (0.0, 0.0): "increasing",
    (1.0, 0.0): "starshaped",
    (1.0, 1.0): "convex",
}


def classify(alpha, m):
    """Name the classical function class a given (alpha, m) pair reduces to."""
    if not (0.0 <= alpha <= 1.0 and 0.0 <= m <= 1.0):
        raise ParameterError(f"(alpha, m) must lie in [0, 1]^2, got ({alpha!r}, {m!r})")
    label = _CLASS_LABELS.get((float(alpha), float(m)))
    if label is not None:
        return label
    if m == 0.0:
        return "alpha-starshaped"
    if alpha == 1.0:
        return "m-convex"
    if m == 1.0:
        return "alpha-convex"
    return "general-(α,m)-convex"
