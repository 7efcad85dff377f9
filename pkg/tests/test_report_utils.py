import json

import pandas as pd
import pytest
from mpmath import mpc, mpf
from pydantic import ValidationError

from eisenstein_mmv.engines.mmv import FactorSymbol
from eisenstein_mmv.engines.quadrature import IntegrandFactor, PathSpec, QuadResult
from eisenstein_mmv.shared_libraries.precision import TruncationBudget
from eisenstein_mmv.shared_libraries.report_utils import (
    CSV_COLUMNS,
    compare,
    emit,
    failed,
    load_report,
    parse_report,
    relative_tol,
    skipped,
    to_frame,
)
from eisenstein_mmv.shared_libraries.schema import CaseResult, EngineInfo, Summary, VerificationReport
from eisenstein_mmv.suites.common import CaseContext

ENGINE = EngineInfo(digits=40, eps=1e-45, n_max=20000, version="0.1.0", grid="small", quad_degree=5)


def make_report(cases):
    return VerificationReport(suite="demo", cases=cases, summary=Summary.of(cases), engine=ENGINE)


def two_cases():
    return [
        compare("demo-02", {"k": 2}, mpc(1, 1), mpc(1, 1), 1e-15),
        compare("demo-01", {"k": 1}, mpf(1), mpf("1.1"), 1e-15, "off by a tenth"),
    ]


class TestCompare:
    def test_pass_iff_error_within_tolerance(self):
        ok = compare("a", {}, mpf(1), mpf(1) + mpf("1e-20"), 1e-18)
        bad = compare("b", {}, mpf(1), mpf(1) + mpf("1e-10"), 1e-18)
        assert ok.passed and ok.abs_err <= ok.tol
        assert not bad.passed

    def test_sides_keep_full_precision(self):
        case = compare("a", {}, mpf(1) / 3, mpf(1) / 3, 0.0)
        assert case.lhs.startswith("0.333333333333333333333333333333333")
        assert case.lhs.endswith("i")

    def test_relative_tol_floors_at_one(self):
        assert relative_tol(1e-12, mpf("0.5")) == 1e-12
        assert relative_tol(1e-12, mpc(0, 100)) == pytest.approx(1e-10)

    def test_skipped_and_failed_cases(self):
        assert skipped("s", {}, "singular").skipped
        case = failed("f", {}, "TruncationError: budget")
        assert not case.passed and not case.skipped


class TestSummary:
    def test_counts(self):
        cases = two_cases() + [skipped("demo-03", {}, "singular")]
        summary = Summary.of(cases)
        assert (summary.total, summary.passed, summary.failed, summary.skipped_singular) == (3, 1, 1, 1)
        assert make_report(cases).exit_code == 1

    def test_inconsistent_summary_rejected(self):
        with pytest.raises(ValidationError):
            VerificationReport(suite="demo", cases=two_cases(), summary=Summary(total=2, passed=2), engine=ENGINE)

    def test_all_passing_report_exits_zero(self):
        cases = [compare("a", {}, mpf(1), mpf(1), 0.0), skipped("b", {}, "singular")]
        assert make_report(cases).exit_code == 0


class TestEmit:
    def test_empty_report_is_valid_json(self, capsys):
        emit(make_report([]), "json")
        data = json.loads(capsys.readouterr().out)
        assert data["summary"] == {"total": 0, "passed": 0, "failed": 0, "skipped-singular": 0}
        assert data["cases"] == []
        assert data["engine"]["digits"] == 40

    def test_two_case_csv_has_three_lines(self, tmp_path):
        path = tmp_path / "report.csv"
        emit(make_report(two_cases()), "csv", str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("demo-01,")

    def test_json_uses_wire_names_and_sorts_cases(self, tmp_path):
        path = tmp_path / "report.json"
        emit(make_report(two_cases()), "json", str(path))
        data = json.loads(path.read_text())
        assert [c["id"] for c in data["cases"]] == ["demo-01", "demo-02"]
        assert data["cases"][0]["pass"] is False
        assert "passed" not in data["cases"][0]

    def test_json_round_trip(self, tmp_path):
        report = make_report(two_cases() + [skipped("demo-03", {"m": 4}, "singular")])
        path = tmp_path / "report.json"
        emit(report, "json", str(path))
        loaded = load_report(str(path))
        assert loaded == report.model_copy(update={"cases": sorted(report.cases, key=lambda c: c.id)})

    def test_output_is_byte_stable(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        emit(make_report(two_cases()), "json", str(first))
        emit(make_report(list(reversed(two_cases()))), "json", str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit(make_report([]), "xml")

    def test_io_errors_surface(self, tmp_path):
        with pytest.raises(OSError):
            emit(make_report([]), "json", str(tmp_path / "missing" / "report.json"))

    def test_frame_columns(self):
        frame = to_frame(make_report(two_cases()))
        assert isinstance(frame, pd.DataFrame)
        assert list(frame.columns) == CSV_COLUMNS
        assert frame["pass"].tolist() == [False, True]

    def test_parse_report_rejects_garbage(self):
        with pytest.raises(ValidationError):
            parse_report('{"suite": "demo"}')


@pytest.mark.parametrize(
    "model",
    [
        CaseResult,
        Summary,
        EngineInfo,
        VerificationReport,
        QuadResult,
        PathSpec,
        IntegrandFactor,
        FactorSymbol,
        CaseContext,
        TruncationBudget,
    ],
)
def test_records_document_every_field(model):
    doc = model.__doc__ or ""
    assert "Attributes:" in doc
    for name in model.model_fields:
        assert f"{name}:" in doc
