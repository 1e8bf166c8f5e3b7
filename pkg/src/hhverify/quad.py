"""Adaptive Simpson quadrature with a Richardson-extrapolated error estimate."""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, EvaluationError, ParameterError

DEFAULT_TOL = 1e-10
MAX_DEPTH = 50

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    subdivisions: int


def _eval(f, x):
    y = float(f(x))
    if not math.isfinite(y):
        raise EvaluationError(f"integrand is not finite at x={x!r} (got {y!r})", abscissa=x)
    return y


class _Acc:
    __slots__ = ("value", "err", "leaves", "converged")

    def __init__(self):
        self.value = 0.0
        self.err = 0.0
        self.leaves = 0
        self.converged = True


def _simpson(f, lo, flo, mid, fmid, hi, fhi, whole, tol, depth, acc):
    # left half first, then right half: summation order is fixed
    lm = 0.5 * (lo + mid)
    rm = 0.5 * (mid + hi)
    flm = _eval(f, lm)
    frm = _eval(f, rm)
    left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
    right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
    halves = left + right
    delta = halves - whole
    exhausted = depth <= 0 or not (lo < lm < mid < rm < hi)
    if abs(delta) <= 15.0 * tol or exhausted:
        if exhausted and abs(delta) > 15.0 * tol:
            acc.converged = False
        acc.value += halves + delta / 15.0
        # |delta|/15 is the Richardson estimate; the second term bounds rounding
        acc.err += abs(delta) / 15.0 + 8.0 * _EPS * (abs(left) + abs(right))
        acc.leaves += 1
        return
    _simpson(f, lo, flo, lm, flm, mid, fmid, left, 0.5 * tol, depth - 1, acc)
    _simpson(f, mid, fmid, rm, frm, hi, fhi, right, 0.5 * tol, depth - 1, acc)


def integrate(f, lo, hi, tol=DEFAULT_TOL, max_depth=MAX_DEPTH):
    """Integrate ``f`` over ``[lo, hi]`` to absolute tolerance ``tol``.

    Returns a :class:`QuadResult`. Raises :class:`EvaluationError` when ``f``
    is not finite at some abscissa and :class:`ConvergenceError` (carrying
    the best estimate) when ``max_depth`` bisections do not reach ``tol``.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ParameterError(f"integration requires finite lo < hi, got [{lo!r}, {hi!r}]")
    if not tol > 0.0:
        raise ParameterError(f"tol must be positive, got {tol!r}")
    mid = 0.5 * (lo + hi)
    flo = _eval(f, lo)
    fmid = _eval(f, mid)
    fhi = _eval(f, hi)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    acc = _Acc()
    _simpson(f, lo, flo, mid, fmid, hi, fhi, whole, tol, max_depth, acc)
    result = QuadResult(acc.value, acc.err, acc.leaves)
    if not math.isfinite(result.value):
        raise EvaluationError("integral overflowed", abscissa=None)
    if not acc.converged:
        raise ConvergenceError(
            f"depth limit {max_depth} reached on [{lo!r}, {hi!r}] before tol={tol!r}; "
            f"best estimate {result.value!r} +/- {result.err_estimate!r}",
            result=result,
        )
    return result


def integrate_kernel(g, a, b, m, tol=DEFAULT_TOL):
    """Integrate ``(t - t**2) * g(t*a + m*(1 - t)*b)`` over ``t`` in [0, 1].

    This is the weighted second-derivative integral on the right of the
    trapezoid identity; ``g`` is normally ``f''``.
    """
    if not 0.0 < m <= 1.0:
        raise ParameterError(f"m must lie in (0, 1], got {m!r}")
    if not a < m * b:
        raise ParameterError(f"kernel integral requires a < m*b, got a={a!r}, m*b={m * b!r}")
    mb = m * b
    return integrate(lambda t: (t - t * t) * g(t * a + (1.0 - t) * mb), 0.0, 1.0, tol)
