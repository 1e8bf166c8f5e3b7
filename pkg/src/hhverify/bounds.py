"""Trapezoid-gap identity and the upper bounds built on it.

Every bound here controls the trapezoid gap

    | (f(a) + f(mb))/2 - 1/(mb - a) * integral_a^{mb} f |

in terms of |f''(a)|, |f''(b)| and the (alpha, m, q) parameters. The
``thm2x`` functions are the (alpha, m)-convex bounds; ``thm11``, ``thm12``
and ``eq0`` are the older m-convex and convex results they reduce to.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from . import quad
from .convexity import AMParams, ConvexityVerdict, check_abs_f2_q, DEFAULT_GRID_N
from .convexity import DEFAULT_TOL as DEFAULT_CONVEXITY_TOL
from .errors import ParameterError
from .specfun import beta, gamma_ratio_power

#: Report column order; also the tie-break order for the tightest bound.
RHS_LABELS = ("thm21", "thm22_tight", "thm22", "thm23_tight", "thm23", "thm24")

# relative width inside which two bound values count as tied
TIE_RTOL = 1e-12

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class FunctionSpec:
    """A test function with its analytic second derivative on [0, b_star]."""

    id: str
    f: Callable
    f2: Callable
    b_star: float
    description: str = ""


@dataclass(frozen=True)
class BoundInputs:
    a: float
    b: float
    params: AMParams
    abs_f2_a: float
    abs_f2_b: float

    def __post_init__(self):
        if not (self.abs_f2_a >= 0.0 and self.abs_f2_b >= 0.0):
            raise ParameterError("|f''(a)| and |f''(b)| must be non-negative")
        if not self.params.m > 0.0:
            raise ParameterError("bound evaluation needs m in (0, 1]")

    @property
    def p(self):
        return self.params.p

    @property
    def interval_len(self):
        return self.params.m * self.b - self.a

    @classmethod
    def from_function(cls, fspec, a, b, params):
        return cls(a, b, params, abs(float(fspec.f2(a))), abs(float(fspec.f2(b))))


@dataclass
class BoundReport:
    lhs: float
    rhs_by_theorem: Dict[str, float]
    slack_by_theorem: Dict[str, float]
    tightest: str
    convexity_gate: Optional[ConvexityVerdict] = None


def _check_admissible(a, b, m, b_star=None):
    if not 0.0 < m <= 1.0:
        raise ParameterError(f"m must lie in (0, 1], got {m!r}")
    if not a < m * b:
        raise ParameterError(f"a < m*b required, got a={a!r}, m*b={m * b!r}")
    if b_star is not None and not (0.0 <= a and m * b <= b_star):
        raise ParameterError(f"need 0 <= a < m*b <= b_star={b_star!r}")


def lhs_trapezoid_signed(fspec, a, b, m, tol=quad.DEFAULT_TOL):
    """(f(a) + f(mb))/2 minus the mean of f over [a, mb]."""
    _check_admissible(a, b, m, fspec.b_star)
    mb = m * b
    integral = quad.integrate(fspec.f, a, mb, tol).value
    return 0.5 * (float(fspec.f(a)) + float(fspec.f(mb))) - integral / (mb - a)


def lhs_trapezoid(fspec, a, b, m, tol=quad.DEFAULT_TOL):
    """The trapezoid gap every bound controls (absolute value)."""
    return abs(lhs_trapezoid_signed(fspec, a, b, m, tol))


def rhs_lemma_integral(fspec, a, b, m, tol=quad.DEFAULT_TOL):
    """Signed kernel form of the trapezoid gap: (mb-a)^2/2 * int (t-t^2) f''(ta + m(1-t)b) dt."""
    _check_admissible(a, b, m, fspec.b_star)
    length = m * b - a
    return 0.5 * length * length * quad.integrate_kernel(fspec.f2, a, b, m, tol).value


def _abs_pow(v, q):
    # 0**q is 0 for every q >= 1; avoid log(0)
    if v == 0.0:
        return 0.0
    return math.pow(v, q)


def _length(inputs, interval_len):
    if interval_len is None:
        interval_len = inputs.interval_len
    if not interval_len > 0.0:
        raise ParameterError(f"interval length m*b - a must be positive, got {interval_len!r}")
    return interval_len


def _require_q_above_one(q, label):
    if not q > 1.0:
        raise ParameterError(f"{label} needs q > 1 (Hoelder conjugate undefined at q={q!r})")


def bound_thm21(inputs, interval_len=None):
    """Hoelder bound with the (t - t^2) weight split evenly."""
    L = _length(inputs, interval_len)
    alpha, m, q = inputs.params.alpha, inputs.params.m, inputs.params.q
    w = 1.0 / ((alpha + 2.0) * (alpha + 3.0))
    bracket = (_abs_pow(inputs.abs_f2_a, q) * w
               + m * _abs_pow(inputs.abs_f2_b, q) * max(1.0 / 6.0 - w, 0.0))
    lead = 1.0 if q == 1.0 else math.pow(1.0 / 6.0, 1.0 - 1.0 / q)
    return 0.5 * L * L * lead * _abs_pow(bracket, 1.0 / q)


def thm22_constant(p, variant="stated"):
    """Multiplier of len^2 * bracket^(1/q) in the Gamma-ratio bound.

    ``tight`` is ``beta(p+1, p+1)**(1/p) / 2`` before sqrt(pi) is replaced by 2.
    """
    stated = 0.125 * gamma_ratio_power(p)
    if variant == "stated":
        return stated
    if variant == "tight":
        return stated * math.pow(0.5 * _SQRT_PI, 1.0 / p)
    raise ParameterError(f"variant must be 'stated' or 'tight', got {variant!r}")


def bound_thm22(inputs, interval_len=None, variant="stated"):
    """Hoelder bound whose weight integral is a Gamma ratio."""
    L = _length(inputs, interval_len)
    alpha, m, q = inputs.params.alpha, inputs.params.m, inputs.params.q
    _require_q_above_one(q, "bound_thm22")
    bracket = (_abs_pow(inputs.abs_f2_a, q) / (alpha + 1.0)
               + m * _abs_pow(inputs.abs_f2_b, q) * (alpha / (alpha + 1.0)))
    return L * L * thm22_constant(inputs.p, variant) * _abs_pow(bracket, 1.0 / q)


def bound_thm23(inputs, interval_len=None, variant="stated"):
    """Hoelder bound splitting t(1-t) into t and (1-t); Beta-function bracket."""
    L = _length(inputs, interval_len)
    alpha, m, q = inputs.params.alpha, inputs.params.m, inputs.params.q
    _require_q_above_one(q, "bound_thm23")
    w = beta(alpha + 1.0, q + 1.0)
    bracket = (_abs_pow(inputs.abs_f2_a, q) * w
               + m * _abs_pow(inputs.abs_f2_b, q) * max(1.0 / (q + 1.0) - w, 0.0))
    stated = 0.5 * L * L * _abs_pow(bracket, 1.0 / q)
    if variant == "stated":
        return stated
    if variant == "tight":
        p = inputs.p
        return stated * math.pow(1.0 / (p + 1.0), 1.0 / p)
    raise ParameterError(f"variant must be 'stated' or 'tight', got {variant!r}")


def bound_thm24(inputs, interval_len=None):
    """Power-mean bound with weight t and Beta-function bracket."""
    L = _length(inputs, interval_len)
    alpha, m, q = inputs.params.alpha, inputs.params.m, inputs.params.q
    w = beta(alpha + 2.0, q + 1.0)
    rest = 1.0 / ((q + 1.0) * (q + 2.0)) - w
    bracket = _abs_pow(inputs.abs_f2_a, q) * w + m * _abs_pow(inputs.abs_f2_b, q) * max(rest, 0.0)
    lead = 1.0 if q == 1.0 else math.pow(0.5, 1.0 - 1.0 / q)
    return 0.5 * L * L * lead * _abs_pow(bracket, 1.0 / q)


def bound_eq0(abs_f2_a, abs_f2_b, a, b):
    """Classical trapezoid bound (b-a)^2/12 * mean(|f''(a)|, |f''(b)|)."""
    if not a < b:
        raise ParameterError(f"a < b required, got a={a!r}, b={b!r}")
    d = b - a
    return d * d / 12.0 * (0.5 * (abs_f2_a + abs_f2_b))


def thm12_branches(lam, abs_f2_a, abs_f2_b, a, b):
    """Both branch formulas of the lambda-weighted bound, regardless of lambda.

    Branch one is meant for lambda in [0, 1/2], branch two for [1/2, 1].
    """
    d2 = (b - a) ** 2
    ca = lam ** 4 + (1.0 + lam) * (1.0 - lam) ** 3 + (5.0 * lam - 3.0) / 4.0
    cb = lam ** 4 + (2.0 - lam) * lam ** 3 + (1.0 - 3.0 * lam) / 4.0
    low = d2 / 12.0 * (ca * abs_f2_a + cb * abs_f2_b)
    high = d2 * (3.0 * lam - 1.0) / 48.0 * (abs_f2_a + abs_f2_b)
    return low, high


def bound_thm12(lam, fspec, a, b, tol=quad.DEFAULT_TOL):
    """Lambda-combination of midpoint and trapezoid rules and its bound.

    Returns ``(lhs, rhs)`` with ``lhs`` the absolute deviation
    ``|(lam-1) f(mid) - lam (f(a)+f(b))/2 + mean(f)|``. At ``lam == 1/2``
    both branches apply and agree; the first is returned.
    """
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"lambda must lie in [0, 1], got {lam!r}")
    if not a < b:
        raise ParameterError(f"a < b required, got a={a!r}, b={b!r}")
    mean = quad.integrate(fspec.f, a, b, tol).value / (b - a)
    fa, fb = float(fspec.f(a)), float(fspec.f(b))
    lhs = abs((lam - 1.0) * float(fspec.f(0.5 * (a + b))) - lam * 0.5 * (fa + fb) + mean)
    low, high = thm12_branches(lam, abs(float(fspec.f2(a))), abs(float(fspec.f2(b))), a, b)
    return lhs, (low if lam <= 0.5 else high)


def bound_thm11(abs_f2_a, abs_f2_b_over_m, a, b, m, q):
    """m-convex Gamma-ratio bound; note it takes |f''(b/m)|, not |f''(b)|."""
    if not q > 1.0:
        raise ParameterError(f"bound_thm11 needs q > 1, got {q!r}")
    if not 0.0 < m <= 1.0:
        raise ParameterError(f"m must lie in (0, 1], got {m!r}")
    if not a < b:
        raise ParameterError(f"a < b required, got a={a!r}, b={b!r}")
    p = q / (q - 1.0)
    mean_q = 0.5 * (_abs_pow(abs_f2_a, q) + m * _abs_pow(abs_f2_b_over_m, q))
    d = b - a
    return d * d / 8.0 * gamma_ratio_power(p) * _abs_pow(mean_q, 1.0 / q)


def all_bounds(inputs):
    """Every applicable bound keyed by label; Gamma/Beta-Hoelder ones need q > 1."""
    out = {"thm21": bound_thm21(inputs)}
    if inputs.params.q > 1.0:
        out["thm22_tight"] = bound_thm22(inputs, variant="tight")
        out["thm22"] = bound_thm22(inputs, variant="stated")
        out["thm23_tight"] = bound_thm23(inputs, variant="tight")
        out["thm23"] = bound_thm23(inputs, variant="stated")
    out["thm24"] = bound_thm24(inputs)
    return out


def tightest_label(rhs_by_theorem):
    """Label of the smallest bound; near-ties go to the earliest label."""
    best = min(rhs_by_theorem.values())
    cutoff = best + TIE_RTOL * abs(best)
    for label in RHS_LABELS:
        if label in rhs_by_theorem and rhs_by_theorem[label] <= cutoff:
            return label
    raise AssertionError("unreachable: no label attains the minimum")


def evaluate_all(fspec, a, b, params, tol=quad.DEFAULT_TOL, *, gate=None,
                 grid_n=DEFAULT_GRID_N, convexity_tol=DEFAULT_CONVEXITY_TOL):
    """Compute the gap, every applicable bound, slacks and the convexity gate.

    Pass a precomputed ``gate`` verdict to skip the grid check.
    """
    _check_admissible(a, b, params.m, fspec.b_star)
    signed = lhs_trapezoid_signed(fspec, a, b, params.m, tol)
    inputs = BoundInputs.from_function(fspec, a, b, params)
    rhs = all_bounds(inputs)
    lhs = abs(signed)
    if gate is None:
        gate = check_abs_f2_q(fspec, params, fspec.b_star, grid_n, convexity_tol)
    return BoundReport(
        lhs=lhs,
        rhs_by_theorem=rhs,
        slack_by_theorem={k: v - lhs for k, v in rhs.items()},
        tightest=tightest_label(rhs),
        convexity_gate=gate,
    )
