import csv
import io
import json

import pytest

from hhverify.bounds import RHS_LABELS
from hhverify.corpus import builtin_corpus, derivative_residual
from hhverify.errors import ConfigError
from hhverify.harness import (
    COLUMNS,
    SweepConfig,
    default_config,
    rows_to_csv,
    run_sweep,
    sweep_summary,
    tightness_table,
    verify_identities,
)


def small_config(**kw):
    base = dict(function_ids=["quadratic"], intervals=[(0.0, 1.0)], alphas=[1.0], ms=[1.0], qs=[1.0])
    base.update(kw)
    return SweepConfig(**base)


def test_corpus_contents(fns):
    assert len(fns) >= 8
    assert {"linear", "quadratic", "cubic", "quartic", "exp",
            "power_2.25", "power_2.5", "power_2.75"} <= set(fns)
    assert fns["quadratic"].f2(0.7) == 2.0
    assert fns["cubic"].f2(0.5) == 3.0
    assert all(s.b_star == 2.0 for s in fns.values())


def test_corpus_power_family_derivatives(fns):
    for alpha in (0.25, 0.5, 0.75):
        s = fns[f"power_{alpha + 2:g}"]
        assert s.f2(0.64) == pytest.approx((alpha + 2) * (alpha + 1) * 0.64 ** alpha, rel=1e-15)


@pytest.mark.parametrize("spec", builtin_corpus(), ids=lambda s: s.id)
def test_derivative_validation(spec):
    assert derivative_residual(spec) <= 1e-5


def test_single_row_equality_case():
    (row,) = run_sweep(small_config(quad_tol=1e-12))
    assert row.lhs == pytest.approx(1 / 6, abs=1e-9)
    assert row.slack_min == pytest.approx(0.0, abs=1e-9)
    assert row.min_rhs_label == "thm21"
    assert row.rhs_thm22 is None and row.rhs_thm23_tight is None
    assert row.convexity_holds is True
    assert row.gate_violation is False


def test_skip_reason():
    (row,) = run_sweep(small_config(intervals=[(0.9, 1.0)], ms=[0.5]))
    assert row.skipped_reason == "a ≥ m·b"
    assert row.lhs is None


def test_skip_accounting():
    cfg = small_config(intervals=[(0.0, 1.0), (0.9, 1.0), (0.5, 3.0)], ms=[0.5, 1.0], qs=[1.0, 2.0])
    rows = run_sweep(cfg)
    info = sweep_summary(rows)
    assert info["total"] == 3 * 2 * 2
    assert info["evaluated"] + info["skipped"] == info["total"]
    assert {r.skipped_reason for r in rows if r.skipped} == {"a ≥ m·b", "b > b_star"}


def test_row_invariants():
    rows = run_sweep(small_config(function_ids=["cubic", "exp"], alphas=[0.5, 1.0], qs=[1.0, 2.0]))
    for r in rows:
        rhs = r.rhs()
        assert r.min_rhs == min(rhs.values())
        assert r.slack_min == r.min_rhs - r.lhs
        if r.q == 1.0:
            assert set(rhs) == {"thm21", "thm24"}
        else:
            assert set(rhs) == set(RHS_LABELS)


@pytest.mark.parametrize("field", ["qs", "alphas", "ms", "intervals", "function_ids"])
def test_empty_list_is_validation_error(field):
    with pytest.raises(ConfigError) as info:
        run_sweep(small_config(**{field: []}))
    assert field in info.value.fields


def test_validation_lists_every_bad_field():
    with pytest.raises(ConfigError) as info:
        small_config(qs=[], ms=[1.5], quad_tol=-1.0, format="xml").validate()
    assert {"qs", "ms", "quad_tol", "format"} <= set(info.value.fields)


def test_unknown_function_id():
    with pytest.raises(ConfigError):
        run_sweep(small_config(function_ids=["nope"]))


def test_config_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "function_ids": ["cubic"], "intervals": [[0, 1]], "alphas": [1], "ms": [1], "qs": [2],
        "grid_n": 20,
    }))
    cfg = SweepConfig.load(path)
    assert cfg.intervals == [(0.0, 1.0)]
    assert cfg.grid_n == 20
    path.write_text(json.dumps({"function_ids": ["cubic"], "bogus": 1}))
    with pytest.raises(ConfigError):
        SweepConfig.load(path)
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        SweepConfig.load(path)


def test_csv_layout_and_precision(tmp_path):
    out = tmp_path / "r.csv"
    run_sweep(small_config(output_path=str(out), intervals=[(0.0, 1.0), (0.9, 1.0)], ms=[0.5]))
    text = out.read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == COLUMNS
    assert COLUMNS[:18] == ["function_id", "a", "b", "alpha", "m", "q", "lhs", "rhs_thm21",
                            "rhs_thm22_tight", "rhs_thm22", "rhs_thm23_tight", "rhs_thm23",
                            "rhs_thm24", "min_rhs", "min_rhs_label", "slack_min",
                            "convexity_holds", "skipped_reason"]
    first = dict(zip(rows[0], rows[1]))
    assert float(first["lhs"]) == pytest.approx(1 / 24, abs=1e-9)
    assert first["rhs_thm22"] == ""
    # 17 significant digits round-trip exactly
    assert first["b"] == "1"
    assert float(format(0.1, ".17g")) == 0.1


def test_json_output(tmp_path):
    out = tmp_path / "r.json"
    rows = run_sweep(small_config(output_path=str(out), format="json", qs=[1.0, 2.0]))
    data = json.loads(out.read_text())
    assert [list(d) for d in data] == [COLUMNS] * 2
    assert data[1]["rhs_thm22"] == rows[1].rhs_thm22
    assert data[0]["rhs_thm22"] is None


def test_sweep_deterministic_bytes(tmp_path):
    cfg = small_config(function_ids=["exp", "power_2.5"], alphas=[0.25, 1.0], qs=[1.0, 3.0])
    p1, p2 = tmp_path / "1.csv", tmp_path / "2.csv"
    run_sweep(SweepConfig(**{**cfg.__dict__, "output_path": str(p1)}))
    run_sweep(SweepConfig(**{**cfg.__dict__, "output_path": str(p2)}))
    assert p1.read_bytes() == p2.read_bytes()
    assert rows_to_csv(run_sweep(cfg)).encode("utf-8") == p1.read_bytes()


def test_tightness_examples(tmp_path):
    header, table = tightness_table(small_config())
    row = dict(zip(header, table[0]))
    assert row["rows"] == 1 and row["thm21"] == 1 and row["thm24"] == 0

    header, table = tightness_table(small_config(function_ids=["linear"], qs=[2.0]))
    assert dict(zip(header, table[0]))["thm21"] == 1

    out = tmp_path / "t.csv"
    cfg = small_config(function_ids=["cubic", "quartic"], qs=[2.0], output_path=str(out))
    rows = run_sweep(cfg, write=False)
    assert all(r.rhs_thm22 is not None and r.rhs_thm23 is not None for r in rows)
    header, table = tightness_table(cfg, rows=rows)
    lines = list(csv.reader(io.StringIO(out.read_text())))
    assert lines[0] == header
    assert sum(int(v) for v in lines[1][4:]) == int(lines[1][3]) == 2


def test_gate_soundness_on_default_grid():
    rows = run_sweep(default_config())
    assert not any(r.gate_violation for r in rows)


def test_verify_identities_default_passes():
    summary = verify_identities()
    assert summary.passed, "\n".join(summary.lines())
    gamma_check = next(c for c in summary.checks if c.name == "gamma_half_sqrt_pi")
    assert gamma_check.worst_residual < 1e-13


def test_verify_identities_unattainable_tol_reports_failures():
    summary = verify_identities(tol=1e-30)
    assert not summary.passed
    failed = [c for c in summary.checks if not c.passed]
    assert failed and all(c.worst_residual > 1e-30 for c in failed)
    assert any("FAIL" in line for line in summary.lines())


def test_violation_under_passed_gate_is_flagged():
    # f'' understated by 10x: the gate passes on the wrong f'' and the bound fails
    from hhverify.bounds import FunctionSpec

    liar = FunctionSpec("liar", lambda x: x ** 3, lambda x: 0.6 * x, 2.0)
    rows = run_sweep(small_config(function_ids=["liar"]), corpus=[liar])
    assert rows[0].convexity_holds is True
    assert rows[0].gate_violation is True
    assert sweep_summary(rows)["gate_violations"] == 1
