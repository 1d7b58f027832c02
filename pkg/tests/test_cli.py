import io
import json

import pytest

from soliton_obstruction.cli import run
from soliton_obstruction.exactnum import PolyN, RatN, ratn


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv, "--json")
    return code, json.loads(text)


def as_ratn(payload) -> RatN:
    return RatN.from_polys(PolyN.from_coefficients(payload["num"]), PolyN.from_coefficients(payload["den"]))


def test_obstruction_report():
    code, report = invoke_json("obstruction", "--n-dim", "4", "--b-factors", "2")
    assert code == 0
    assert report["schema"] == "1"
    assert report["status"] == "ok"
    obstruction = report["results"]["obstruction"]
    assert obstruction["Q4"]["values"]["4"] == "2959/1575"
    assert obstruction["Q2"]["values"]["4"] == "-311/126"
    assert obstruction["verdicts"]["n4_sum_negative"] is True
    assert {f["quantity"] for f in report["findings"]} >= {"Q2", "Q4", "third_variation.c4"}


def test_obstruction_compares_published_and_pipeline_totals():
    code, report = invoke_json("obstruction", "--n-dim", "4")
    assert code == 0
    rows = {r["quantity"]: r for r in report["results"]["published_vs_pipeline"]}
    assert rows["Q4"]["published"]["values"]["4"] == "2959/1575"
    assert rows["Q4"]["pipeline"]["values"]["4"] == "4759/1575"
    assert rows["Q2"]["pipeline"]["values"]["4"] == "-127/36"
    assert rows["Q4+Q2"]["pipeline"]["values"]["4"] == "-1063/2100"
    assert rows["Q4+Q2"]["shift"]["values"]["4"] == "1/12"


def test_total_shift_is_symbolic_in_n():
    _, report = invoke_json("obstruction", "--b-factors", "1", "--symbolic")
    total = report["results"]["published_vs_pipeline"][2]
    assert as_ratn(total["shift"]) == ratn("(n - 2)**2/(12*n)")


def test_obstruction_text_shows_the_comparison():
    code, text = invoke("obstruction")
    assert code == 0
    assert "published_vs_pipeline" in text
    assert "2959/1575" in text and "4759/1575" in text


def test_obstruction_for_one_sphere_factor():
    code, report = invoke_json("obstruction", "--b-factors", "1", "--symbolic")
    assert code == 0
    assert report["results"]["b1_combined"]["integer_roots"] == []


def test_obstruction_rejects_wrong_dimension_for_two_spheres():
    code, report = invoke_json("obstruction", "--n-dim", "5", "--b-factors", "2")
    assert code == 1
    assert report["status"] == "error"


def test_fss_symbolic():
    code, report = invoke_json("fss", "--symbolic")
    assert code == 0
    coefficients = report["results"]["f_ss"]
    assert as_ratn(coefficients["v2"]) == ratn("-n/3")
    assert as_ratn(coefficients["S_v"]) == ratn("-(n - 6)/60")
    assert as_ratn(coefficients["sigma2"]) == ratn("-(13*n - 38)/60")
    assert coefficients["v2"]["values"] == {}


def test_fss_at_a_dimension():
    code, report = invoke_json("fss", "--n-dim", "4")
    assert code == 0
    assert report["results"]["f_ss"]["v2"]["values"] == {"4": "-4/3"}


def test_hb_reports_its_erratum_as_a_finding():
    code, report = invoke_json("hb")
    assert code == 0
    assert [f["quantity"] for f in report["findings"]] == ["h_b.sigma2"]
    assert "Σ_b h̃_b = 0" in report["findings"][0]["detail"]
    assert report["discrepancies"] == []


def test_kernel_of_s3xs3():
    code, report = invoke_json("kernel", "--manifold", "smxsn", "--m", "3", "--n", "3")
    assert code == 0
    kernel = report["results"]["kernel"]
    assert (kernel["dim_conformal_kernel"], kernel["dim_tt_kernel"]) == (0, 0)


def test_kernel_without_assumption_is_an_error():
    code, report = invoke_json("kernel", "--manifold", "s2xN")
    assert code == 1
    assert "AssumptionNotAsserted" in report["error"]


def test_product_spectrum():
    code, report = invoke_json("product-spectrum", "--operator", "functions", "--cutoff", "2")
    assert code == 0
    entries = report["results"]["spectrum"]
    assert [e["value"] for e in entries] == ["0", "2"]
    assert entries[1]["multiplicity"] == 6


def test_spectrum_accepts_rational_cutoff():
    code, report = invoke_json("spectrum", "--operator", "einstein", "--cutoff", "9/2")
    assert code == 0
    assert [e["value"] for e in report["results"]["spectrum"]] == ["-2", "0", "4"]


def test_oracle_command():
    code, report = invoke_json("oracle", "--alphas", "2,3")
    assert code == 0
    assert report["results"]["kernel_element"]["mean_v2"] == "13/3"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_oracle_for_one_factor_is_a_config_error():
    code, report = invoke_json("oracle", "--b-factors", "1")
    assert code == 1
    assert report["status"] == "error"
    assert "ConfigError" in report["error"]


@pytest.mark.parametrize(
    "argv",
    [
        ["fss", "--bogus"],
        ["obstruction", "--n-dim", "four"],
        ["nonsense"],
        [],
        ["fss", "--n-dim", "1/0"],
        ["spectrum", "--cutoff", "3/0"],
        ["oracle", "--alphas", "1/0,2"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    code, _ = invoke(*argv)
    assert code == 1
    assert "usage error" in capsys.readouterr().err


def test_json_is_byte_stable():
    assert invoke("crossterms", "--json") == invoke("crossterms", "--json")


def test_timestamps_are_opt_in():
    _, plain = invoke_json("thirdvar")
    _, stamped = invoke_json("thirdvar", "--timestamps")
    assert plain["timestamp"] is None
    assert stamped["timestamp"]


def test_text_report():
    code, text = invoke("utilde", "--n-dim", "4")
    assert code == 0
    assert text.startswith("✅")
    assert "u_tilde" in text
    assert "-5/12" in text


def test_report_format_from_environment(monkeypatch):
    monkeypatch.setenv("SOLITON_REPORT_FORMAT", "json")
    code, text = invoke("fss")
    assert code == 0
    assert json.loads(text)["schema"] == "1"


def test_invalid_report_format_is_an_error(monkeypatch):
    monkeypatch.setenv("SOLITON_REPORT_FORMAT", "yaml")
    code, _ = invoke("fss")
    assert code == 1


def test_metrics_out(tmp_path):
    path = tmp_path / "metrics.json"
    code, _ = invoke("fss", "--metrics-out", str(path))
    assert code == 0
    assert json.loads(path.read_text())["status"] == "ok"
