"""Building, writing and reading verification reports."""

import logging
import sys
from typing import Any, Dict, Optional

import pandas as pd
from mpmath import mpc, mpf

from eisenstein_mmv.shared_libraries.precision import format_complex
from eisenstein_mmv.shared_libraries.schema import CaseResult, VerificationReport

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["id", "abs_err", "tol", "pass"]


def compare(
    case_id: str,
    parameters: Dict[str, Any],
    lhs: mpc,
    rhs: mpc,
    tol: float,
    notes: str = "",
) -> CaseResult:
    """Case result for |lhs - rhs| <= tol; both sides kept at full precision."""
    abs_err = float(abs(mpc(lhs) - mpc(rhs)))
    tol = float(tol)
    return CaseResult(
        id=case_id,
        parameters=parameters,
        lhs=format_complex(lhs),
        rhs=format_complex(rhs),
        abs_err=abs_err,
        tol=tol,
        passed=abs_err <= tol,
        notes=notes,
    )


def relative_tol(rel: float, reference: mpc) -> float:
    return float(rel * max(mpf(1), abs(mpc(reference))))


def skipped(case_id: str, parameters: Dict[str, Any], reason: str) -> CaseResult:
    return CaseResult(id=case_id, parameters=parameters, skipped=True, notes=reason)


def failed(case_id: str, parameters: Dict[str, Any], reason: str) -> CaseResult:
    return CaseResult(id=case_id, parameters=parameters, notes=reason)


def _sorted(report: VerificationReport) -> VerificationReport:
    return report.model_copy(update={"cases": sorted(report.cases, key=lambda c: c.id)})


def to_frame(report: VerificationReport) -> pd.DataFrame:
    rows = [
        {"id": c.id, "abs_err": c.abs_err, "tol": c.tol, "pass": c.passed}
        for c in _sorted(report).cases
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def emit(report: VerificationReport, fmt: str, path: Optional[str] = None) -> None:
    """Write the report as JSON (full structure) or CSV (id, abs_err, tol, pass).

    ``path`` of None or "-" writes to stdout. I/O errors propagate unchanged.
    """
    report = _sorted(report)
    if fmt == "json":
        text = report.model_dump_json(indent=2, by_alias=True) + "\n"
        if path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
    elif fmt == "csv":
        frame = to_frame(report)
        if path in (None, "-"):
            frame.to_csv(sys.stdout, index=False)
        else:
            frame.to_csv(path, index=False)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    logger.info("wrote %s report for suite %s to %s", fmt, report.suite, path or "stdout")


def parse_report(text: str) -> VerificationReport:
    return VerificationReport.model_validate_json(text)


def load_report(path: str) -> VerificationReport:
    with open(path, "r", encoding="utf-8") as f:
        return parse_report(f.read())
