import json

import pytest

from soliton_obstruction.errors import ConfigError
from soliton_obstruction.reports import RunReport
from soliton_obstruction.varengine import Pipeline, SigmaQuad
from soliton_obstruction.verification import Harness, oracle_check, verify_all, write_metrics


@pytest.fixture(scope="module")
def symbolic_run() -> RunReport:
    return verify_all(skip_oracle=True)


def test_verify_all_symbolic_checks(symbolic_run):
    assert symbolic_run.status == "ok"
    assert [c.name for c in symbolic_run.checks if c.status == "fail"] == []
    assert symbolic_run.discrepancies == []


def test_verify_all_reports_the_sigma4_finding(symbolic_run):
    findings = {d.quantity: d.explained_by for d in symbolic_run.findings}
    assert findings["third_variation.c4"] == "third-sigma4"
    assert findings["h_b.sigma2"] == "hb-sigma2"
    sigma4 = next(c for c in symbolic_run.checks if c.name == "σ₄ adjudication")
    assert sigma4.status == "finding"
    assert "-1/9" in sigma4.detail


def test_skip_oracle_marks_the_section(symbolic_run):
    oracle = [c for c in symbolic_run.checks if c.name == "oracle"]
    assert [c.status for c in oracle] == ["skipped"]
    assert not any(c.name.startswith("oracle[") for c in symbolic_run.checks)


def test_verify_all_payload(symbolic_run):
    obstruction = symbolic_run.results["obstruction"]
    assert obstruction["Q4"]["values"]["4"] == "2959/1575"
    assert obstruction["pipeline_Q4"]["values"]["4"] == "4759/1575"
    assert obstruction["verdicts"]["n4_sum_negative"] is True


def test_verify_all_with_oracle_in_parallel():
    report = verify_all(workers=4)
    assert report.status == "ok"
    names = [c.name for c in report.checks]
    assert "oracle[2,3] cross_tt gauge invariance" in names
    assert names.index("f_ss rhs") < names.index("oracle[1,1] laplacian matrices")


def test_corrupted_matrix_is_a_mismatch(corrupted_lap):
    report = verify_all(skip_oracle=True, lap=corrupted_lap)
    assert report.status == "mismatch"
    assert any(d.quantity.startswith("f_ss.") for d in report.discrepancies)


def test_oracle_check():
    report = oracle_check((2, 3))
    assert report.status == "ok"
    assert report.results["kernel_element"]["mean_v2"] == "13/3"
    assert report.results["kernel_element"]["sigma4"] == "97"


def test_oracle_check_degenerate_notice():
    report = oracle_check((0, 0))
    assert report.status == "ok"
    assert report.notices and "vacuous" in report.notices[0]


def test_oracle_check_from_seed_is_reproducible():
    first, second = oracle_check(seed=7), oracle_check(seed=7)
    assert first.results == second.results
    assert first.status == "ok"


def test_oracle_check_needs_two_alphas():
    with pytest.raises(ConfigError):
        oracle_check((1,))


def test_write_metrics_merges(tmp_path):
    path = tmp_path / "out" / "metrics.json"
    path.parent.mkdir()
    path.write_text(json.dumps({"previous": 1}))
    write_metrics(str(path), RunReport(command=["fss"]).finalize())
    metrics = json.loads(path.read_text())
    assert metrics["previous"] == 1
    assert metrics["status"] == "ok"
    assert metrics["command"] == "fss"


def test_sigma4_matching_neither_display_fails(monkeypatch):
    pipeline = Pipeline()
    third = pipeline.third_variation
    monkeypatch.setattr(pipeline, "third_variation", SigmaQuad(third.c22, third.c4 + 1))
    (check,) = Harness(pipeline).sigma4()
    assert check.status == "fail"
