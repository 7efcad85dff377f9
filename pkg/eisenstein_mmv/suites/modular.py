"""Suites for the length <= 2 multiple modular values based at i."""

import itertools
from typing import Dict, List

from mpmath import mp, mpc

from eisenstein_mmv.engines.mmv import (
    CUSP_THEN_CONST,
    PRINTED,
    REDERIVED,
    R_iter,
    S_coeff,
    T_const_closed,
    T_const_const,
    T_cusp_quadrature,
    T_cusp_reg,
    T_mixed_reduce,
    const,
    cusp,
    first_difference_lhs,
    first_difference_rhs,
    haberland_rhs,
    int0_reg,
    l_value_at_zero,
    request,
    rho,
)
from eisenstein_mmv.shared_libraries.core_algebra import make_index
from eisenstein_mmv.shared_libraries.errors import SingularExponentError
from eisenstein_mmv.shared_libraries.report_utils import compare, relative_tol
from eisenstein_mmv.shared_libraries.schema import CaseResult
from eisenstein_mmv.suites.common import FULL, CaseContext, CasePlan, SuiteDefinition, arbitrate, case_id

FUND_TOL = 1e-15
HABERLAND_REL_TOL = 1e-12
CYCLE_TOL = 1e-10
LVALUE_REL_TOL = 1e-15


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def symmetry_sign(m: int) -> int:
    """Sign (-1)^(a1 + a2) relating S(k1,k2; a1,a2) to its reflected partner."""
    return _sign(m)


def _cycle_tol(k1: int, k2: int) -> float:
    return float(CYCLE_TOL * (2 * mp.pi) ** (2 * k1 + 2 * k2 - 2))


def _depth2_plans(prefix: str, pairs) -> List[CasePlan]:
    plans = []
    for k1, k2 in pairs:
        for a1 in range(1, 2 * k1):
            for a2 in range(1, 2 * k2):
                plans.append(
                    CasePlan(
                        id=case_id(prefix, [k1, k2], [a1, a2]),
                        parameters={"ks": [k1, k2], "alphas": [a1, a2]},
                    )
                )
    return plans


def _pairs(grid: str):
    ks = (2, 3, 4) if grid == FULL else (2, 3)
    return list(itertools.product(ks, repeat=2))


# ---------- FUND ----------


def plan_fund(grid: str) -> List[CasePlan]:
    plans = []
    negative = (-3, -2, -1) if grid == FULL else (-2, -1)
    for k in (2, 3, 4):
        for alpha in negative + tuple(range(1, 2 * k)):
            plans.append(
                CasePlan(id=case_id("fund1", k, alpha), parameters={"formula": 1, "k": k, "alpha": alpha})
            )
    for plan in _depth2_plans("fund2", _pairs(grid)):
        plans.append(plan.model_copy(update={"parameters": {"formula": 2, **plan.parameters}}))
    return plans


def check_fund(plan: CasePlan, context: CaseContext) -> CaseResult:
    """Both inversion formulas for R-integrals based at i.

    R(E^0; a) = (-1)^a [T(E^0; 2k-a) + T(E^inf; 2k-a)] + T(E^inf; a)
    R(E^inf_1, E^0_2; a1, a2) = (-1)^(a1+a2) [T(E^0_2, E^inf_1; 2k2-a2, -a1)
        + T(E^inf_2, E^inf_1; 2k2-a2, -a1)] + last
    with last = T(E^inf_2, E^inf_1; -a2, -a1) as printed, or
    -T(E^inf_2, E^inf_1; a2, a1) as re-derived.
    """
    p = plan.parameters
    budget = context.budget
    if p["formula"] == 1:
        k, a = p["k"], p["alpha"]
        lhs = rho(k, a, budget)
        m = 2 * k - a
        if m > 2 * k:
            inner, notes = T_cusp_quadrature(k, m, budget, context.quad_degree), "direct quadrature on (0, i]"
        else:
            inner, notes = T_cusp_reg(k, m, budget), "regularized through inversion"
        rhs = _sign(a) * (inner + T_const_closed(k, m)) + T_const_closed(k, a)
        return compare(plan.id, p, lhs, rhs, FUND_TOL, notes)

    (k1, k2), (a1, a2) = p["ks"], p["alphas"]
    m = a1 + a2
    lhs = R_iter([const(k1), cusp(k2)], [a1, a2], budget)
    shared = _sign(m) * (
        T_mixed_reduce(CUSP_THEN_CONST, k2, k1, 2 * k2 - a2, -a1, budget)
        + T_const_const(k2, k1, 2 * k2 - a2, -a1)
    )
    return arbitrate(
        plan,
        lhs,
        [
            (PRINTED, lambda: shared + T_const_const(k2, k1, -a2, -a1)),
            (REDERIVED, lambda: shared - T_const_const(k2, k1, a2, a1)),
        ],
        FUND_TOL,
    )


# ---------- HABERLAND ----------


def plan_haberland(grid: str) -> List[CasePlan]:
    ks = (2, 3, 4, 5, 6) if grid == FULL else (2, 3, 4)
    return [
        CasePlan(id=case_id("haberland", k, a), parameters={"k": k, "alpha": a})
        for k in ks
        for a in range(1, 2 * k)
    ]


def check_haberland(plan: CasePlan, context: CaseContext) -> CaseResult:
    k, a = plan.parameters["k"], plan.parameters["alpha"]
    lhs = S_coeff(request([k], [a]), context.budget)
    rhs = haberland_rhs(k, a, context.budget)
    return compare(plan.id, plan.parameters, lhs, rhs, relative_tol(HABERLAND_REL_TOL, rhs))


# ---------- SYMMETRY ----------


def plan_symmetry(grid: str) -> List[CasePlan]:
    return _depth2_plans("symmetry", _pairs(grid))


def check_symmetry(plan: CasePlan, context: CaseContext) -> CaseResult:
    """S(k1,k2; a1,a2) = (-1)^(a1+a2) S(k2,k1; 2k2-a2, 2k1-a1)."""
    (k1, k2), (a1, a2) = plan.parameters["ks"], plan.parameters["alphas"]
    req = request([k1, k2], [a1, a2])
    lhs = S_coeff(req, context.budget)
    rhs = symmetry_sign(a1 + a2) * S_coeff(req.reflected().swapped(), context.budget)
    return compare(plan.id, plan.parameters, lhs, rhs, _cycle_tol(k1, k2))


# ---------- FIRST DIFFERENCE ----------


def plan_firstdiff(grid: str) -> List[CasePlan]:
    return _depth2_plans("firstdiff", _pairs(grid))


def check_firstdiff(plan: CasePlan, context: CaseContext) -> CaseResult:
    (k1, k2), (a1, a2) = plan.parameters["ks"], plan.parameters["alphas"]
    tol = _cycle_tol(k1, k2)
    if a1 + a2 in (2 * k1, 2 * k2):
        raise SingularExponentError("first difference is singular at a1 + a2 = 2k", a1 + a2)
    if (k1, a1) == (k2, a2):
        zero = mpc(0)
        return compare(plan.id, plan.parameters, zero, zero, tol, "diagonal case: both sides vanish")
    req = request([k1, k2], [a1, a2])
    budget = context.budget
    lhs = first_difference_lhs(req, budget)
    return arbitrate(
        plan,
        lhs,
        [
            (PRINTED, lambda: first_difference_rhs(req, PRINTED, budget)),
            (REDERIVED, lambda: first_difference_rhs(req, REDERIVED, budget)),
        ],
        tol,
    )


# ---------- L-VALUES AT 0 ----------


def plan_lvalue(grid: str) -> List[CasePlan]:
    ks = (2, 3, 4, 5) if grid == FULL else (2, 3, 4)
    return [
        CasePlan(id=case_id("lvalue", k, m), parameters={"k": k, "m": m})
        for k in ks
        for m in range(2, 2 * k + 3)
    ]


def check_lvalue(plan: CasePlan, context: CaseContext) -> CaseResult:
    """Regularized Int(E^0_{2k}; m)(0) against i^m (m-1)! (2 pi)^-m zeta(m) zeta(m-2k+1)."""
    k, m = plan.parameters["k"], plan.parameters["m"]
    rhs = l_value_at_zero(k, m)
    lhs = int0_reg(make_index([k], [m]), context.budget)
    return compare(
        plan.id,
        plan.parameters,
        lhs,
        rhs,
        relative_tol(LVALUE_REL_TOL, rhs),
        "reference zeta from mpmath",
    )


SUITES: Dict[str, SuiteDefinition] = {
    "fund": SuiteDefinition(name="fund", plan=plan_fund, check=check_fund),
    "haberland": SuiteDefinition(name="haberland", plan=plan_haberland, check=check_haberland),
    "symmetry": SuiteDefinition(name="symmetry", plan=plan_symmetry, check=check_symmetry),
    "firstdiff": SuiteDefinition(name="firstdiff", plan=plan_firstdiff, check=check_firstdiff),
    "lvalue": SuiteDefinition(name="lvalue", plan=plan_lvalue, check=check_lvalue),
}
