"""Plumbing shared by every verification suite."""

import logging
from typing import Any, Callable, Dict, List, Sequence, Tuple

from mpmath import mpc
from pydantic import BaseModel, ConfigDict, Field

from eisenstein_mmv.engines.integrals import int_eval
from eisenstein_mmv.engines.lseries import l_eval, tau_power
from eisenstein_mmv.shared_libraries.core_algebra import LSERIES, FormalSum
from eisenstein_mmv.shared_libraries.precision import TruncationBudget, format_real, to_hp
from eisenstein_mmv.shared_libraries.report_utils import compare
from eisenstein_mmv.shared_libraries.schema import CaseResult

logger = logging.getLogger(__name__)

SMALL = "small"
FULL = "full"
GRIDS = (SMALL, FULL)


class CasePlan(BaseModel):
    """One parameter tuple of a suite, planned before anything is evaluated.

    Attributes:
        id: Case identifier, unique within the suite.
        parameters: JSON-friendly parameters (lists, ints, strings).
    """

    model_config = ConfigDict(frozen=True)

    id: str
    parameters: Dict[str, Any]


class CaseContext(BaseModel):
    """Settings every case check receives.

    Attributes:
        budget: Truncation budget for series and integrals.
        quad_degree: Gauss-Legendre degree for the quadrature oracle.
    """

    model_config = ConfigDict(frozen=True)

    budget: TruncationBudget
    quad_degree: int = Field(5, ge=2, le=10)


class SuiteDefinition(BaseModel):
    """A named suite: a grid planner and a per-case checker.

    Both callables live at module level so cases can be shipped to worker
    processes by suite name.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    plan: Callable[[str], List[CasePlan]]
    check: Callable[[CasePlan, CaseContext], CaseResult]


def fs_eval(fs: FormalSum, tau: mpc, budget: TruncationBudget) -> mpc:
    """Numerical value of a formal sum of L-series and tau^j Int generators."""
    total = mpc(0)
    for g, c in fs:
        if g.kind == LSERIES:
            value = l_eval(g.index, tau, budget)
        else:
            value = tau_power(tau, g.tau_power) * int_eval(g.index, tau, budget)
        total += to_hp(c) * value
    return total


def arbitrate(
    plan: CasePlan,
    lhs: mpc,
    candidates: Sequence[Tuple[str, Callable[[], mpc]]],
    tol: float,
) -> CaseResult:
    """Try the candidate right-hand sides in order and adopt the first that holds.

    The first candidate is the formula as printed; later ones are re-derived
    readings. Every rejected candidate is named in the notes.
    """
    rejected: List[str] = []
    first = None
    for name, rhs in candidates:
        value = rhs()
        result = compare(plan.id, plan.parameters, lhs, value, tol)
        if first is None:
            first = result
        if result.passed:
            notes = f"adopted {name}"
            if rejected:
                notes += "; rejected " + ", ".join(rejected)
                logger.warning("case %s: printed reading fails, %s", plan.id, notes)
            return result.model_copy(update={"notes": notes})
        rejected.append(f"{name} (abs_err {format_real(abs(lhs - value), 6)})")
    notes = "no candidate holds; rejected " + ", ".join(rejected)
    logger.warning("case %s: %s", plan.id, notes)
    return first.model_copy(update={"notes": notes})


def case_id(prefix: str, *parts: Any) -> str:
    """Zero-padded identifier so lexical order follows the grid order."""
    out = [prefix]
    for part in parts:
        if isinstance(part, int):
            out.append(f"{part:+03d}" if part < 0 else f"{part:02d}")
        elif isinstance(part, (list, tuple)):
            out.append("_".join(f"{p:02d}" for p in part))
        else:
            out.append(str(part))
    return "-".join(out)
