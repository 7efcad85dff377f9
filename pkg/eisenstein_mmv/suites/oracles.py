"""Cross-checks of every closed form against an independent oracle."""

from typing import Callable, Dict, List

from mpmath import mpc

from eisenstein_mmv.engines.eisenstein import SIEVE, cusp_truncation
from eisenstein_mmv.engines.integrals import elem_exp_tail, int_eval
from eisenstein_mmv.engines.lseries import l_coeffs_bruteforce, l_coeffs_dp
from eisenstein_mmv.engines.mmv import (
    CUSP_THEN_CONST,
    R_cusp_gamma,
    R_iter,
    T_const_const,
    T_cusp_quadrature,
    T_cusp_reg,
    T_mixed_reduce,
    const,
    cusp,
    int0_reg,
    int0_reg_inverted,
)
from eisenstein_mmv.engines.quadrature import IntegrandFactor, PathSpec, quad_oracle
from eisenstein_mmv.shared_libraries.core_algebra import make_index
from eisenstein_mmv.shared_libraries.precision import parse_complex
from eisenstein_mmv.shared_libraries.report_utils import compare, relative_tol
from eisenstein_mmv.shared_libraries.schema import CaseResult
from eisenstein_mmv.suites.common import FULL, CaseContext, CasePlan, SuiteDefinition, arbitrate, case_id

INT_QUAD_TOL = 1e-18
R_QUAD_TOL = 1e-18
TAIL_QUAD_TOL = 1e-25
REG_QUAD_TOL = 1e-15
INT0_REL_TOL = 1e-12
GAMMA_REL_TOL = 1e-25

_DP_INDICES = [
    ([2], [1]),
    ([3], [2]),
    ([2, 2], [1, 1]),
    ([2, 3], [2, 1]),
    ([3, 2], [1, 2]),
    ([2, 2, 2], [1, 1, 1]),
    ([2, 3, 2], [2, 1, 1]),
]
_INT_QUAD_INDICES = [([2], [1]), ([2], [3]), ([3], [2]), ([2, 2], [1, 1]), ([2, 3], [1, 2])]
_INT0_INDICES = [([2, 2], [1, 2]), ([2, 3], [1, 1]), ([2, 3], [3, 2]), ([3, 2], [2, 1]), ([3, 3], [1, 4])]


def _plan(kind: str, *id_parts, **parameters) -> CasePlan:
    return CasePlan(id=case_id(f"oracle-{kind}", *id_parts), parameters={"check": kind, **parameters})


def plan_oracle_cross(grid: str) -> List[CasePlan]:
    full = grid == FULL
    plans = []
    for ks, alphas in _DP_INDICES:
        plans.append(_plan("dp", ks, alphas, ks=ks, alphas=alphas, n=50))
    taus = ["1i", "2i"]
    for ks, alphas in _INT_QUAD_INDICES:
        for tau in taus:
            plans.append(_plan("int-quad", ks, alphas, tau, ks=ks, alphas=alphas, tau=tau))
    for alpha in (1, 3):
        plans.append(_plan("tail-quad", 2, alpha, k=2, alpha=alpha))
    for kinds in (["const", "cusp"], ["cusp", "cusp"]):
        plans.append(_plan("r-quad", "-".join(kinds), [1, 1], kinds=kinds, ks=[2, 2], alphas=[1, 1]))
    for k in (2, 3, 4) if full else (2, 3):
        for m in (2 * k + 1, 2 * k + 2):
            plans.append(_plan("reg-quad", k, m, k=k, m=m))
        for beta in (1, 2, 3):
            plans.append(_plan("gamma", k, beta, k=k, beta=beta))
    for beta in (1, 2):
        plans.append(_plan("mixed-quad", [2, 2], [5, beta], ks=[2, 2], alphas=[5, beta]))
    betas = (1, 2, 3, 4) if full else (1, 2, 3)
    for b1 in betas:
        for b2 in betas:
            plans.append(_plan("const-const", [b1, b2], ks=[2, 3], betas=[b1, b2]))
    for ks, alphas in _INT0_INDICES:
        plans.append(_plan("int0", ks, alphas, ks=ks, alphas=alphas))
        plans.append(_plan("int0-shuffle", ks, alphas, ks=ks, alphas=alphas))
    return plans


def _check_dp(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    index = make_index(p["ks"], p["alphas"])
    dp = l_coeffs_dp(index, p["n"])
    brute = l_coeffs_bruteforce(index, p["n"])
    err = float(max(abs(a - b) for a, b in zip(dp.coeffs, brute.coeffs)))
    return CaseResult(
        id=plan.id,
        parameters=p,
        lhs=f"c({p['n']})={dp.c(p['n'])}",
        rhs=f"c({p['n']})={brute.c(p['n'])}",
        abs_err=err,
        tol=0.0,
        passed=dp == brute,
        notes="exact rational comparison of c(1..N)",
    )


def _infinite_path(start: mpc, context: CaseContext) -> PathSpec:
    return PathSpec(start=start, degree=context.quad_degree)


def _check_int_quad(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    tau = parse_complex(p["tau"])
    lhs = int_eval(make_index(p["ks"], p["alphas"]), tau, context.budget)
    factors = [IntegrandFactor(kind="cusp", k=k, alpha=a) for k, a in zip(p["ks"], p["alphas"])]
    rhs = quad_oracle(factors, _infinite_path(tau, context), context.budget).value
    return compare(plan.id, p, lhs, rhs, INT_QUAD_TOL)


def _check_tail_quad(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    k, alpha = p["k"], p["alpha"]
    base = mpc(0, 1)
    n = cusp_truncation(k, base, context.budget)
    sigma = SIEVE.table_hp(2 * k - 1, n)
    lhs = sum((sigma[m] * elem_exp_tail(m, alpha, base) for m in range(1, n + 1)), mpc(0))
    factors = [IntegrandFactor(kind="cusp", k=k, alpha=alpha)]
    rhs = quad_oracle(factors, _infinite_path(base, context), context.budget).value
    return compare(plan.id, p, lhs, rhs, TAIL_QUAD_TOL, f"{n} frequencies")


def _check_r_quad(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    symbols = [const(k) if kind == "const" else cusp(k) for kind, k in zip(p["kinds"], p["ks"])]
    lhs = R_iter(symbols, p["alphas"], context.budget)
    factors = [IntegrandFactor(kind=kind, k=k, alpha=a) for kind, k, a in zip(p["kinds"], p["ks"], p["alphas"])]
    rhs = quad_oracle(factors, _infinite_path(mpc(0, 1), context), context.budget).value
    return compare(plan.id, p, lhs, rhs, R_QUAD_TOL)


def _check_reg_quad(plan: CasePlan, context: CaseContext) -> CaseResult:
    k, m = plan.parameters["k"], plan.parameters["m"]
    lhs = T_cusp_reg(k, m, context.budget)
    rhs = T_cusp_quadrature(k, m, context.budget, context.quad_degree)
    return compare(plan.id, plan.parameters, lhs, rhs, REG_QUAD_TOL, "convergent at 0; regularization must agree")


def _check_gamma(plan: CasePlan, context: CaseContext) -> CaseResult:
    """Incomplete-gamma series against the exp-poly closed form of R(E^0; beta)."""
    k, beta = plan.parameters["k"], plan.parameters["beta"]
    lhs = R_cusp_gamma(k, beta, context.budget)
    rhs = int_eval(make_index([k], [beta]), mpc(0, 1), context.budget)
    return compare(plan.id, plan.parameters, lhs, rhs, relative_tol(GAMMA_REL_TOL, rhs))


def _check_mixed_quad(plan: CasePlan, context: CaseContext) -> CaseResult:
    (k_cusp, k_const), (alpha, beta) = plan.parameters["ks"], plan.parameters["alphas"]
    lhs = T_mixed_reduce(CUSP_THEN_CONST, k_cusp, k_const, alpha, beta, context.budget)
    factors = [
        IntegrandFactor(kind="cusp", k=k_cusp, alpha=alpha),
        IntegrandFactor(kind="const", k=k_const, alpha=beta),
    ]
    path = PathSpec(start=mpc(0), end=mpc(0, 1), degree=context.quad_degree)
    rhs = quad_oracle(factors, path, context.budget).value
    return compare(plan.id, plan.parameters, lhs, rhs, REG_QUAD_TOL)


def _check_const_const(plan: CasePlan, context: CaseContext) -> CaseResult:
    (k1, k2), (b1, b2) = plan.parameters["ks"], plan.parameters["betas"]
    factors = [IntegrandFactor(kind="const", k=k1, alpha=b1), IntegrandFactor(kind="const", k=k2, alpha=b2)]
    path = PathSpec(start=mpc(0), end=mpc(0, 1), degree=context.quad_degree)
    lhs = quad_oracle(factors, path, context.budget).value
    return arbitrate(
        plan,
        lhs,
        [
            ("printed i^(b1*b2)", lambda: T_const_const(k1, k2, b1, b2, exponent_rule="product")),
            ("re-derived i^(b1+b2)", lambda: T_const_const(k1, k2, b1, b2)),
        ],
        REG_QUAD_TOL,
    )


def _check_int0(plan: CasePlan, context: CaseContext) -> CaseResult:
    index = make_index(plan.parameters["ks"], plan.parameters["alphas"])
    lhs = int0_reg(index, context.budget)
    rhs = int0_reg_inverted(index, context.budget)
    tol = relative_tol(INT0_REL_TOL, rhs)
    return compare(plan.id, plan.parameters, lhs, rhs, tol, "split at i vs direct inversion")


def _check_int0_shuffle(plan: CasePlan, context: CaseContext) -> CaseResult:
    """Int_12(0) + Int_21(0) = Int_1(0) Int_2(0) for regularized values."""
    (k1, k2), (a1, a2) = plan.parameters["ks"], plan.parameters["alphas"]
    budget = context.budget
    lhs = int0_reg(make_index([k1, k2], [a1, a2]), budget) + int0_reg(make_index([k2, k1], [a2, a1]), budget)
    rhs = int0_reg(make_index([k1], [a1]), budget) * int0_reg(make_index([k2], [a2]), budget)
    return compare(plan.id, plan.parameters, lhs, rhs, relative_tol(INT0_REL_TOL, rhs))


_CHECKS: Dict[str, Callable[[CasePlan, CaseContext], CaseResult]] = {
    "dp": _check_dp,
    "int-quad": _check_int_quad,
    "tail-quad": _check_tail_quad,
    "r-quad": _check_r_quad,
    "reg-quad": _check_reg_quad,
    "gamma": _check_gamma,
    "mixed-quad": _check_mixed_quad,
    "const-const": _check_const_const,
    "int0": _check_int0,
    "int0-shuffle": _check_int0_shuffle,
}


def check_oracle_cross(plan: CasePlan, context: CaseContext) -> CaseResult:
    return _CHECKS[plan.parameters["check"]](plan, context)


SUITES: Dict[str, SuiteDefinition] = {
    "oracle-cross": SuiteDefinition(name="oracle-cross", plan=plan_oracle_cross, check=check_oracle_cross),
}
