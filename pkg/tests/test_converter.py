"""
格式转换器测试
"""

import json

import pytest

from ceps_eval.converter import FormatConverter, curve_to_csv, write_report
from ceps_eval.corpstats import corr_matrix
from ceps_eval.errorsim import curve_data
from ceps_eval.evaluator import CepsEvaluator
from ceps_eval.exceptions import ReportWriteError
from ceps_eval.metrics import pooled_estimate
from ceps_eval.types import EvalReport, ScoreOptions


@pytest.fixture
def report(sample_manifest):
    return CepsEvaluator().score(sample_manifest, ScoreOptions(aggregation="both", group_by="language"))


def test_report_bytes_are_deterministic(report, tmp_path):
    first = write_report(report, tmp_path / "a.json").read_bytes()
    second = write_report(report, tmp_path / "b.json").read_bytes()
    assert first == second
    assert first.endswith(b"\n")
    assert b"\r\n" not in first


def test_report_reads_back(report, tmp_path):
    path = write_report(report, tmp_path / "r.json")
    assert json.loads(path.read_text(encoding="utf-8")) == report.to_dict()


def test_report_key_order(report):
    keys = list(report.to_dict())
    assert keys[:6] == ["segmentation", "aggregation", "tau_source", "cer", "ceps", "pooled"]
    assert keys[-2:] == ["per_utterance", "warnings"]


def test_empty_per_utterance(tmp_path):
    report = EvalReport(
        per_utterance=[],
        pooled=pooled_estimate([(10, 1.0, 1)]),
        macro=None,
        cer=0.1,
        segmentation="grapheme/nfc",
    )
    data = json.loads(write_report(report, tmp_path / "empty.json").read_text(encoding="utf-8"))
    assert data["per_utterance"] == []
    assert data["pooled"]["n"] == 10
    assert "macro" not in data


def test_unwritable_path(report, tmp_path):
    with pytest.raises(ReportWriteError):
        write_report(report, tmp_path / "missing" / "r.json")


def test_non_finite_values_rejected():
    with pytest.raises(ReportWriteError):
        FormatConverter().to_json({"x": float("nan")})


def test_report_markdown(report):
    text = FormatConverter().report_to_markdown(report)
    assert "## Summary" in text
    assert "## Groups" in text
    assert "## Utterances" in text
    assert "en-002" in text


def test_corr_markdown_marks_significance(data_dir):
    import pandas as pd

    table = pd.read_csv(data_dir / "script_results.csv")
    matrix = corr_matrix(table, columns=["cer", "graphemes", "phonemes"])
    text = FormatConverter().corr_to_markdown(matrix)
    assert "0.854049*" in text
    assert "-0.369604*" not in text
    assert "-0.369604" in text


def test_curve_csv():
    text = curve_to_csv(curve_data(3))
    assert text.splitlines() == [
        "p,ceps,raw",
        "0.000000,0.000000,0.000000",
        "0.450000,0.597837,0.450000",
        "0.900000,2.302585,0.900000",
    ]


def _floats(node):
    if isinstance(node, float):
        yield node
    elif isinstance(node, dict):
        for value in node.values():
            yield from _floats(value)
    elif isinstance(node, list):
        for value in node:
            yield from _floats(value)


def test_report_numbers_have_six_decimals_at_most(report, tmp_path):
    data = json.loads(write_report(report, tmp_path / "r.json").read_text(encoding="utf-8"))
    values = list(_floats(data))
    assert values
    for value in values:
        assert round(value, 6) == value
