"""Parameter sweeps, identity verification and report writers."""

import csv
import io
import itertools
import json
import math
import os
from collections import Counter
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional, Tuple

import numpy as np

from . import quad, specfun
from .bounds import (
    RHS_LABELS,
    BoundInputs,
    bound_eq0,
    bound_thm11,
    bound_thm12,
    bound_thm21,
    bound_thm22,
    bound_thm23,
    evaluate_all,
    lhs_trapezoid_signed,
    rhs_lemma_integral,
    thm12_branches,
)
from .convexity import AMParams, check_abs_f2_q
from .corpus import builtin_corpus, corpus_by_id, derivative_residual
from .errors import ConfigError, HHVerifyError

GATE_SLACK_TOL = 1e-9


@dataclass
class SweepConfig:
    function_ids: List[str]
    intervals: List[Tuple[float, float]]
    alphas: List[float]
    ms: List[float]
    qs: List[float]
    quad_tol: float = 1e-10
    grid_n: int = 50
    convexity_tol: float = 1e-9
    output_path: Optional[str] = None
    format: str = "csv"

    def validate(self, known_ids=None):
        bad = {}
        for name in ("function_ids", "intervals", "alphas", "ms", "qs"):
            if not getattr(self, name):
                bad[name] = "must be a non-empty list"
        if known_ids is not None:
            unknown = [f for f in self.function_ids if f not in known_ids]
            if unknown:
                bad["function_ids"] = f"unknown ids {unknown}"
        for i, iv in enumerate(self.intervals):
            if len(iv) != 2 or not all(_finite(v) for v in iv):
                bad["intervals"] = f"entry {i} is not a finite (a, b) pair: {iv!r}"
                break
        if any(not (_finite(v) and 0.0 <= v <= 1.0) for v in self.alphas):
            bad["alphas"] = "values must lie in [0, 1]"
        if any(not (_finite(v) and 0.0 < v <= 1.0) for v in self.ms):
            bad["ms"] = "values must lie in (0, 1]"
        if any(not (_finite(v) and v >= 1.0) for v in self.qs):
            bad["qs"] = "values must be finite and >= 1"
        for name in ("quad_tol", "convexity_tol"):
            v = getattr(self, name)
            if not (_finite(v) and v > 0.0):
                bad[name] = "must be a positive number"
        if not (isinstance(self.grid_n, int) and self.grid_n >= 3):
            bad["grid_n"] = "must be an integer >= 3"
        if self.format not in ("csv", "json"):
            bad["format"] = "must be 'csv' or 'json'"
        if bad:
            raise ConfigError(bad)
        return self

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        extra = sorted(set(data) - names)
        if extra:
            raise ConfigError({k: "unknown field" for k in extra})
        missing = [n for n in ("function_ids", "intervals", "alphas", "ms", "qs") if n not in data]
        if missing:
            raise ConfigError({k: "missing" for k in missing})
        kw = dict(data)
        try:
            kw["intervals"] = [tuple(float(v) for v in iv) for iv in kw["intervals"]]
            for name in ("alphas", "ms", "qs"):
                kw[name] = [float(v) for v in kw[name]]
            kw["function_ids"] = [str(v) for v in kw["function_ids"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError({"lists": f"malformed value ({exc})"}) from None
        return cls(**kw)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError({"file": f"{path}: {exc}"}) from None
        if not isinstance(data, dict):
            raise ConfigError({"file": f"{path}: top level must be an object"})
        return cls.from_dict(data)


def _finite(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def default_config():
    """The dominance grid: whole corpus, 5 alphas x 2 ms x 4 qs."""
    return SweepConfig(
        function_ids=[s.id for s in builtin_corpus()],
        intervals=[(0.0, 1.0), (0.0, 2.0), (0.5, 1.5), (0.25, 2.0), (1.0, 2.0), (0.2, 0.8)],
        alphas=[0.0, 0.25, 0.5, 0.75, 1.0],
        ms=[0.5, 1.0],
        qs=[1.0, 1.5, 2.0, 3.0],
    )


@dataclass
class ReportRow:
    function_id: str
    a: float
    b: float
    alpha: float
    m: float
    q: float
    lhs: Optional[float] = None
    rhs_thm21: Optional[float] = None
    rhs_thm22_tight: Optional[float] = None
    rhs_thm22: Optional[float] = None
    rhs_thm23_tight: Optional[float] = None
    rhs_thm23: Optional[float] = None
    rhs_thm24: Optional[float] = None
    min_rhs: Optional[float] = None
    min_rhs_label: Optional[str] = None
    slack_min: Optional[float] = None
    convexity_holds: Optional[bool] = None
    skipped_reason: Optional[str] = None
    # set when the gate passed but some bound sits below the gap
    gate_violation: Optional[bool] = None

    @property
    def skipped(self):
        return self.skipped_reason is not None

    def rhs(self):
        """Present bound columns keyed by label, in column order."""
        out = {}
        for label in RHS_LABELS:
            v = getattr(self, "rhs_" + label)
            if v is not None:
                out[label] = v
        return out


COLUMNS = [f.name for f in fields(ReportRow)]


def skip_reason(a, b, m, b_star):
    if a < 0.0:
        return "a < 0"
    if a >= m * b:
        return "a ≥ m·b"
    if b > b_star:
        return "b > b_star"
    return None


def run_sweep(config, corpus=None, write=True):
    """Evaluate every (function, interval, alpha, m, q) combination in order.

    One row per combination; inadmissible ones carry ``skipped_reason``. The
    convexity gate is computed once per (function, alpha, m, q). When
    ``write`` is true and ``config.output_path`` is set, the report is
    written there in ``config.format``.
    """
    specs = corpus_by_id(corpus)
    config.validate(known_ids=specs)
    gates = {}
    rows = []
    for fid, (a, b), alpha, m, q in itertools.product(
        config.function_ids, config.intervals, config.alphas, config.ms, config.qs
    ):
        fs = specs[fid]
        row = ReportRow(fid, a, b, alpha, m, q)
        reason = skip_reason(a, b, m, fs.b_star)
        if reason is not None:
            row.skipped_reason = reason
            rows.append(row)
            continue
        params = AMParams(alpha, m, q)
        key = (fid, alpha, m, q, fs.b_star)
        if key not in gates:
            gates[key] = check_abs_f2_q(fs, params, fs.b_star, config.grid_n, config.convexity_tol)
        rep = evaluate_all(fs, a, b, params, config.quad_tol, gate=gates[key])
        row.lhs = rep.lhs
        for label, v in rep.rhs_by_theorem.items():
            setattr(row, "rhs_" + label, v)
        row.min_rhs_label = rep.tightest
        # label is tie-broken; the value is the exact minimum
        row.min_rhs = min(rep.rhs_by_theorem.values())
        row.slack_min = row.min_rhs - rep.lhs
        row.convexity_holds = rep.convexity_gate.holds
        row.gate_violation = bool(row.convexity_holds and row.slack_min < -GATE_SLACK_TOL)
        rows.append(row)
    if write and config.output_path:
        write_report(rows, config.output_path, config.format)
    return rows


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_cell(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows):
    return json.dumps([asdict(r) for r in rows], indent=2, ensure_ascii=False) + "\n"


def write_report(rows, path, fmt="csv"):
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def sweep_summary(rows):
    done = [r for r in rows if not r.skipped]
    return {
        "total": len(rows),
        "evaluated": len(done),
        "skipped": len(rows) - len(done),
        "gate_passed": sum(1 for r in done if r.convexity_holds),
        "gate_violations": sum(1 for r in done if r.gate_violation),
    }


def tightness_table(config, corpus=None, rows=None):
    """Count, per (alpha, m, q) cell, which bound attained the minimum.

    Returns ``(header, table_rows)``; also writes the pivoted CSV to
    ``config.output_path`` when it is set.
    """
    if rows is None:
        rows = run_sweep(config, corpus, write=False)
    counts = {}
    for r in rows:
        if r.skipped:
            continue
        counts.setdefault((r.alpha, r.m, r.q), Counter())[r.min_rhs_label] += 1
    header = ["alpha", "m", "q", "rows"] + list(RHS_LABELS)
    table = []
    for (alpha, m, q), c in sorted(counts.items()):
        table.append([alpha, m, q, sum(c.values())] + [c.get(label, 0) for label in RHS_LABELS])
    if config.output_path:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        for t in table:
            w.writerow([_cell(v) for v in t])
        d = os.path.dirname(config.output_path)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return header, table


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_residual: float
    threshold: float
    cases: int


@dataclass
class VerificationSummary:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, residuals, limit, tol=math.inf):
        residuals = list(residuals)
        worst = max(residuals) if residuals else 0.0
        threshold = min(limit, tol)
        self.checks.append(CheckResult(name, bool(worst <= threshold), worst, threshold, len(residuals)))

    def lines(self):
        for c in self.checks:
            yield (f"{'PASS' if c.passed else 'FAIL'}  {c.name:<28} worst={c.worst_residual:.3e} "
                   f"threshold={c.threshold:.1e} cases={c.cases}")


def lemma_configs():
    """Admissible (a, b, m) triples on [0, 2] used for identity checks."""
    out = []
    for m in (0.4, 0.7, 1.0):
        for a, b in ((0.0, 1.0), (0.0, 2.0), (0.1, 1.5), (0.2, 2.0), (0.3, 1.2),
                     (0.5, 2.0), (0.05, 0.9), (0.7, 2.0), (1.0, 2.0)):
            if a < m * b:
                out.append((a, b, m))
    return out


def verify_identities(tol=1e-9, corpus=None, seed=20240601, quad_tol=1e-12):
    """Run the identity and reduction checks; failures are results, not errors.

    Each check has its own intrinsic threshold; the effective threshold is
    the smaller of that and ``tol``.
    """
    if corpus is None:
        corpus = builtin_corpus()
    rng = np.random.default_rng(seed)
    s = VerificationSummary()

    s.add("gamma_half_sqrt_pi", [abs(specfun.gamma(0.5) - math.sqrt(math.pi))], 1e-13, tol)
    s.add("gamma_recurrence",
          [abs(specfun.gamma(x + 1) - x * specfun.gamma(x)) / specfun.gamma(x + 1)
           for x in np.linspace(0.5, 20.0, 79)], 1e-12, tol)
    s.add("beta_duplication",
          [abs(specfun.beta(x, x) - 2.0 ** (1 - 2 * x) * specfun.beta(0.5, x)) / specfun.beta(x, x)
           for x in (1.0, 1.5, 2.0, 3.0, 5.0, 11.0)], 1e-12, tol)
    s.add("beta_integral",
          [abs(specfun.beta(p + 1, p + 1)
               - quad.integrate(lambda t, p=p: (t - t * t) ** p, 0.0, 1.0, 1e-13).value)
           for p in (1.0, 1.5, 2.0, 3.0)], 1e-9, tol)

    res = []
    for fs in corpus:
        for a, b, m in lemma_configs():
            res.append(abs(lhs_trapezoid_signed(fs, a, b, m, quad_tol)
                           - rhs_lemma_integral(fs, a, b, m, quad_tol)))
    s.add("trapezoid_identity", res, 1e-9, tol)

    # finite differences cannot resolve below ~1e-6, so --tol does not apply
    s.add("derivative_validation", [derivative_residual(fs) for fs in corpus], 1e-5)

    res21, res23, res_loose, res_cont, res_l1 = [], [], [], [], []
    for _ in range(100):
        fa, fb = rng.uniform(0.0, 10.0, 2)
        a = rng.uniform(0.0, 1.0)
        b = a + rng.uniform(0.05, 1.0)
        q = rng.uniform(1.0, 10.0)
        if q == 1.0:
            q = 1.5
        ref = bound_eq0(fa, fb, a, b)
        got = bound_thm21(BoundInputs(a, b, AMParams(1.0, 1.0, 1.0), fa, fb))
        res21.append(abs(got - ref) / max(1.0, abs(ref)))
        p22 = bound_thm22(BoundInputs(a, b, AMParams(1.0, 1.0, q), fa, fb))
        p11 = bound_thm11(fa, fb, a, b, 1.0, q)
        res23.append(abs(p22 - p11) / max(1.0, abs(p11)))
        for alpha in (0.0, 0.5, 1.0):
            inp = BoundInputs(a, b, AMParams(alpha, rng.uniform(0.5, 1.0), q), fa, fb)
            if inp.interval_len <= 0.0:
                continue
            res_loose.append(max(0.0,
                                 bound_thm22(inp, variant="tight") - bound_thm22(inp),
                                 bound_thm23(inp, variant="tight") - bound_thm23(inp)))
        low, high = thm12_branches(0.5, fa, fb, a, b)
        res_cont.append(abs(low - high) / max(1.0, abs(high)))
        _, high1 = thm12_branches(1.0, fa, fb, a, b)
        res_l1.append(abs(high1 - ref) / max(1.0, abs(ref)))
    s.add("reduction_thm21_eq0", res21, 1e-12, tol)
    s.add("reduction_thm22_thm11", res23, 1e-12, tol)
    s.add("loosening_order", res_loose, 0.0, tol)
    s.add("thm12_branch_continuity", res_cont, 1e-12, tol)
    s.add("thm12_lambda1_eq0", res_l1, 1e-12, tol)

    quad2 = corpus_by_id(corpus).get("quadratic")
    if quad2 is not None:
        lhs, rhs = bound_thm12(0.5, quad2, 0.0, 1.0, quad_tol)
        s.add("thm12_half_quadratic", [abs(lhs - 1 / 24), abs(rhs - 1 / 24)], 1e-9, tol)
    return s


def check_dominance(rows):
    """Worst bound-minus-gap over rows whose gate passed (>= -1e-9 expected)."""
    worst = math.inf
    for r in rows:
        if r.skipped or not r.convexity_holds:
            continue
        worst = min(worst, min(r.rhs().values()) - r.lhs)
    return worst


__all__ = [
    "SweepConfig", "ReportRow", "COLUMNS", "run_sweep", "write_report", "tightness_table",
    "verify_identities", "default_config", "sweep_summary", "VerificationSummary",
    "CheckResult", "HHVerifyError", "lemma_configs", "check_dominance",
]
