"""Suites for the algebra of L-series and tau-integrals: rewrite round trips,
shuffle and stuffle products, and the derivative contracts."""

import itertools
from fractions import Fraction
from typing import Dict, List

from mpmath import mpc, mpf

from eisenstein_mmv.engines.eisenstein import eis_cusp_eval
from eisenstein_mmv.engines.integrals import int_eval
from eisenstein_mmv.engines.lseries import l_eval, tau_power
from eisenstein_mmv.engines.rewrite import (
    int_to_l,
    int_to_l_sum,
    l_to_int,
    l_to_int_sum,
    shuffle_product,
    stuffle_product,
)
from eisenstein_mmv.shared_libraries.core_algebra import (
    FormalSum,
    format_formal_sum,
    format_generator,
    fs_combine,
    lseries,
    make_index,
    tau_integral,
)
from eisenstein_mmv.shared_libraries.precision import parse_complex
from eisenstein_mmv.shared_libraries.report_utils import compare
from eisenstein_mmv.shared_libraries.schema import CaseResult
from eisenstein_mmv.suites.common import FULL, CaseContext, CasePlan, SuiteDefinition, case_id, fs_eval

SHUFFLE_TOL = 1e-15
STUFFLE_TOL = 1e-15
DERIV_REL_TOL = 1e-8
DERIV_STEP = mpf("1e-12")


def _words(ks, alphas, depth):
    letters = [(k, a) for k in ks for a in alphas]
    return itertools.product(letters, repeat=depth)


# ---------- ROUNDTRIP ----------


def plan_roundtrip(grid: str) -> List[CasePlan]:
    if grid == FULL:
        ks, alphas, max_depth, max_shift = (2, 3, 4, 5), (1, 2, 3, 4), 3, 2
    else:
        ks, alphas, max_depth, max_shift = (2, 3), (1, 2, 3), 2, 1
    plans = []
    for depth in range(1, max_depth + 1):
        for word in _words(ks, alphas, depth):
            k_list = [k for k, _ in word]
            a_list = [a for _, a in word]
            for shift in range(max_shift + 1):
                for kind in ("L", "I"):
                    plans.append(
                        CasePlan(
                            id=case_id(f"roundtrip-{kind}", k_list, a_list, shift),
                            parameters={"kind": kind, "ks": k_list, "alphas": a_list, "shift": shift},
                        )
                    )
    return plans


def check_roundtrip(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    if p["kind"] == "L":
        g = lseries(p["ks"], p["alphas"], p["shift"])
        back = int_to_l_sum(l_to_int(g))
    else:
        g = tau_integral(p["ks"], p["alphas"], p["shift"])
        back = l_to_int_sum(int_to_l(g.index, g.tau_power))
    diff = fs_combine(back, FormalSum.of(g), -1)
    err = float(sum((abs(c) for _, c in diff), Fraction(0)))
    return CaseResult(
        id=plan.id,
        parameters=p,
        lhs=format_formal_sum(back),
        rhs=format_generator(g),
        abs_err=err,
        tol=0.0,
        passed=err == 0,
        notes="exact rational comparison",
    )


# ---------- SHUFFLE ----------


def plan_shuffle(grid: str) -> List[CasePlan]:
    taus = ["1i", "2i"]
    if grid == FULL:
        letters = [(k, a) for k in (2, 3, 4) for a in (1, 2, 3)]
        left_words = [(x,) for x in letters] + [(x, y) for x in letters[:4] for y in letters[:4]]
    else:
        letters = [(k, a) for k in (2, 3) for a in (1, 2)]
        left_words = [(x,) for x in letters]
    plans = []
    for u in left_words:
        for v in letters:
            for tau in taus:
                u_list = [list(x) for x in u]
                plans.append(
                    CasePlan(
                        id=case_id("shuffle", [x for letter in u for x in letter], list(v), tau),
                        parameters={"u": u_list, "v": list(v), "tau": tau},
                    )
                )
    return plans


def check_shuffle(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    u = tuple(tuple(x) for x in p["u"])
    v = (tuple(p["v"]),)
    tau = parse_complex(p["tau"])
    budget = context.budget
    lhs = int_eval(make_index(*zip(*u)), tau, budget) * int_eval(make_index(*zip(*v)), tau, budget)
    rhs = fs_eval(shuffle_product(u, v), tau, budget)
    return compare(plan.id, p, lhs, rhs, SHUFFLE_TOL)


# ---------- STUFFLE ----------


def plan_stuffle(grid: str) -> List[CasePlan]:
    max_weight = 6 if grid == FULL else 5
    ks = (2, 3)
    plans = []
    for left_depth, right_depth in ((1, 1), (1, 2), (2, 2)):
        for left_ks in itertools.product(ks, repeat=left_depth):
            for right_ks in itertools.product(ks, repeat=right_depth):
                for alphas in itertools.product(range(1, max_weight + 1), repeat=left_depth + right_depth):
                    if sum(alphas) > max_weight:
                        continue
                    left = {"ks": list(left_ks), "alphas": list(alphas[:left_depth])}
                    right = {"ks": list(right_ks), "alphas": list(alphas[left_depth:])}
                    left_letters = [x for letter in zip(left["ks"], left["alphas"]) for x in letter]
                    plans.append(
                        CasePlan(
                            id=case_id("stuffle", left_letters, right["ks"], right["alphas"]),
                            parameters={"left": left, "right": right, "tau": "1i"},
                        )
                    )
    return plans


def check_stuffle(plan: CasePlan, context: CaseContext) -> CaseResult:
    p = plan.parameters
    g1 = lseries(p["left"]["ks"], p["left"]["alphas"])
    g2 = lseries(p["right"]["ks"], p["right"]["alphas"])
    tau = parse_complex(p["tau"])
    budget = context.budget
    lhs = l_eval(g1.index, tau, budget) * l_eval(g2.index, tau, budget)
    rhs = fs_eval(stuffle_product(g1, g2), tau, budget)
    return compare(plan.id, p, lhs, rhs, STUFFLE_TOL)


# ---------- DERIVATIVES ----------

_DERIV_L_SMALL = [
    ([2], [2]),
    ([3], [2]),
    ([2], [3]),
    ([3], [3]),
    ([2, 2], [2, 1]),
    ([2, 3], [2, 1]),
    ([2, 2], [3, 2]),
    ([2, 3], [3, 2]),
    ([2, 2, 2], [2, 1, 1]),
]
_DERIV_I_SMALL = [
    ([2], [1]),
    ([2], [2]),
    ([3], [1]),
    ([3], [2]),
    ([2, 2], [1, 1]),
    ([3, 2], [1, 1]),
    ([2, 2], [2, 1]),
    ([3, 2], [2, 1]),
    ([2, 2, 2], [1, 1, 1]),
    ([2, 3, 2], [1, 2, 1]),
]
_DERIV_EXTRA = [([4], [3]), ([2, 4], [3, 1]), ([3, 3, 2], [2, 1, 2])]


def plan_deriv(grid: str) -> List[CasePlan]:
    l_indices = _DERIV_L_SMALL + (_DERIV_EXTRA if grid == FULL else [])
    i_indices = _DERIV_I_SMALL + (_DERIV_EXTRA if grid == FULL else [])
    plans = []
    for ks, alphas in l_indices:
        for t in (0, 1):
            plans.append(
                CasePlan(
                    id=case_id("deriv-L", ks, alphas, t),
                    parameters={"kind": "L", "ks": ks, "alphas": alphas, "t": t, "tau": "2i"},
                )
            )
    for ks, alphas in i_indices:
        plans.append(
            CasePlan(
                id=case_id("deriv-I", ks, alphas),
                parameters={"kind": "I", "ks": ks, "alphas": alphas, "tau": "2i"},
            )
        )
    return plans


def _central_difference(fn, tau: mpc) -> mpc:
    return (fn(tau + DERIV_STEP) - fn(tau - DERIV_STEP)) / (2 * DERIV_STEP)


def check_deriv(plan: CasePlan, context: CaseContext) -> CaseResult:
    """d/dtau of the series by central differences against the closed derivative formulas.

    The tau^t factor of an L-series is differentiated exactly; only L^(0) goes
    through the difference quotient.

    L: d/dtau L^(t)(ks; a_1, ..) = t L^(t-1)(ks; a_1, ..) + L^(t)(ks; a_1 - 1, ..)
    Int: d/dtau Int(ks; a) = -E^0_{2k_1}(tau) tau^(a_1 - 1) Int(rest)
    """
    p = plan.parameters
    ks, alphas = p["ks"], p["alphas"]
    tau = parse_complex(p["tau"])
    budget = context.budget
    if p["kind"] == "L":
        t = p["t"]
        series = make_index(ks, alphas)
        lhs = tau_power(tau, t) * _central_difference(lambda z: l_eval(series, z, budget), tau)
        if t:
            lhs += t * tau_power(tau, t - 1) * l_eval(series, tau, budget)
        rhs = l_eval(make_index(ks, [alphas[0] - 1] + alphas[1:], t), tau, budget)
        if t:
            rhs += t * l_eval(make_index(ks, alphas, t - 1), tau, budget)
    else:
        index = make_index(ks, alphas)
        lhs = _central_difference(lambda z: int_eval(index, z, budget), tau)
        rest = int_eval(make_index(ks[1:], alphas[1:]), tau, budget)
        rhs = -eis_cusp_eval(ks[0], tau, budget) * tau ** (alphas[0] - 1) * rest
    return compare(plan.id, p, lhs, rhs, float(DERIV_REL_TOL * abs(rhs)))


SUITES: Dict[str, SuiteDefinition] = {
    "roundtrip": SuiteDefinition(name="roundtrip", plan=plan_roundtrip, check=check_roundtrip),
    "shuffle": SuiteDefinition(name="shuffle", plan=plan_shuffle, check=check_shuffle),
    "stuffle": SuiteDefinition(name="stuffle", plan=plan_stuffle, check=check_stuffle),
    "deriv": SuiteDefinition(name="deriv", plan=plan_deriv, check=check_deriv),
}
