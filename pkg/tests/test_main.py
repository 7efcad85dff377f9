import mock
import pytest

from eisenstein_mmv import main as cli
from eisenstein_mmv.shared_libraries.report_utils import compare, load_report
from eisenstein_mmv.shared_libraries.schema import EngineInfo, Summary, VerificationReport

ENGINE = EngineInfo(digits=40, eps=1e-45, n_max=20000, version="0.1.0", grid="small", quad_degree=5)


def make_report(ok: bool) -> VerificationReport:
    cases = [compare("demo-01", {"k": 2}, 1, 1 if ok else 2, 1e-15)]
    return VerificationReport(suite="haberland", cases=cases, summary=Summary.of(cases), engine=ENGINE)


def test_convert_int_to_l(capsys):
    code = cli.main(["convert", "--dir", "int2l", "--index", "I{ks=[2];alphas=[2];taupow=0}"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "-1/1*L{ks=[2];alphas=[1];t=1} + 1/1*L{ks=[2];alphas=[2];t=0}"


def test_eval_l_prints_value_bound_and_terms(capsys):
    code = cli.main(["eval-l", "--index", "L{ks=[2];alphas=[2];t=0}", "--tau", "1i"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0].startswith("value: ")
    assert lines[1].startswith("bound: ")
    assert int(lines[2].split(":")[1]) > 0


def test_eval_l_writes_coefficients(tmp_path):
    out = tmp_path / "coeffs.csv"
    code = cli.main(["eval-l", "--index", "L{ks=[2];alphas=[1];t=0}", "--tau", "2i", "--coeffs-out", str(out)])
    assert code == 0
    assert out.read_text().splitlines()[1].startswith("1,")


def test_wrong_generator_kind_exits_with_two():
    assert cli.main(["eval-l", "--index", "I{ks=[2];alphas=[1];taupow=0}", "--tau", "1i"]) == 2


def test_malformed_index_exits_with_two():
    assert cli.main(["convert", "--dir", "l2int", "--index", "L{ks=[2]"]) == 2


def test_invalid_precision_override_exits_with_two():
    assert cli.main(["convert", "--dir", "l2int", "--index", "L{ks=[2];alphas=[1];t=0}", "--digits", "5"]) == 2


def test_unknown_suite_is_rejected_by_the_parser():
    with pytest.raises(SystemExit):
        cli.main(["verify", "--suite", "nonsense"])


@pytest.mark.parametrize("ok,expected", [(True, 0), (False, 1)])
def test_verify_exit_code_follows_report(tmp_path, ok, expected):
    out = tmp_path / "report.json"
    with mock.patch("eisenstein_mmv.main.run_suite", return_value=make_report(ok)) as run_suite:
        code = cli.main(["verify", "--suite", "haberland", "--grid", "small", "--out", str(out)])
    assert code == expected
    assert run_suite.call_args[0][:2] == ("haberland", "small")
    assert load_report(str(out)).summary.failed == (0 if ok else 1)


def test_verify_passes_cli_overrides_to_the_runner():
    with mock.patch("eisenstein_mmv.main.run_suite", return_value=make_report(True)) as run_suite:
        cli.main(["verify", "--suite", "roundtrip", "--digits", "50", "--workers", "1", "--format", "csv"])
    settings = run_suite.call_args[0][2]
    assert settings.DIGITS == 50
    assert settings.WORKERS == 1
    assert settings.OUTPUT_FORMAT == "csv"


def test_stuffle_with_tau_prints_both_sides(capsys):
    left, right = "L{ks=[2];alphas=[1];t=0}", "L{ks=[3];alphas=[1];t=0}"
    code = cli.main(["stuffle", "--left", left, "--right", right, "--tau", "1i"])
    out = capsys.readouterr().out
    assert code == 0
    assert "lhs: " in out and "rhs: " in out


def test_selftest_passes_at_default_precision(capsys):
    assert cli.main(["selftest"]) == 0
    assert "|E_6(i)|" in capsys.readouterr().out


def test_selftest_failure_exits_with_two():
    with mock.patch("eisenstein_mmv.main.modular_defect", return_value=1.0):
        assert cli.main(["selftest"]) == 2
