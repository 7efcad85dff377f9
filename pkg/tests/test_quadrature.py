import pytest
from mpmath import mp, mpc, mpf

from eisenstein_mmv.engines.integrals import int_eval
from eisenstein_mmv.engines.mmv import T_const_closed
from eisenstein_mmv.engines.quadrature import (
    IntegrandFactor,
    PathSpec,
    cusp_tail_majorant,
    quad_oracle,
    standard_nodes,
    warm_quadrature,
)
from eisenstein_mmv.shared_libraries.core_algebra import make_index
from eisenstein_mmv.shared_libraries.errors import DivergentIntegralError, OracleLimitError
from eisenstein_mmv.shared_libraries.precision import TruncationBudget


def test_nodes_integrate_polynomials_exactly():
    warm_quadrature(3)
    nodes = standard_nodes(3, mp.prec)
    assert abs(sum(w for _, w in nodes) - 2) < mpf(10) ** -30
    assert abs(sum(w * x**4 for x, w in nodes) - mpf(2) / 5) < mpf(10) ** -30


@pytest.mark.parametrize("k, alpha, tau", [(2, 1, mpc(0, 1)), (3, 3, mpc(0.25, 1.5))])
def test_single_cusp_integral_matches_closed_form(k, alpha, tau, budget):
    result = quad_oracle([IntegrandFactor(kind="cusp", k=k, alpha=alpha)], PathSpec(start=tau), budget)
    expected = int_eval(make_index([k], [alpha]), tau, budget)
    assert abs(result.value - expected) < mpf(10) ** -25
    assert result.tail_bound < budget.eps
    assert result.panels > 1


def test_constant_on_a_finite_path_from_the_cusp(budget):
    path = PathSpec(start=mpc(0), end=mpc(0, 1))
    result = quad_oracle([IntegrandFactor(kind="const", k=2, alpha=3)], path, budget)
    assert abs(result.value - T_const_closed(2, 3)) < mpf(10) ** -30


@pytest.mark.slow
def test_double_cusp_integral_matches_closed_form(budget):
    factors = [IntegrandFactor(kind="cusp", k=2, alpha=1), IntegrandFactor(kind="cusp", k=2, alpha=1)]
    result = quad_oracle(factors, PathSpec(start=mpc(0, 1)), budget)
    expected = int_eval(make_index([2, 2], [1, 1]), mpc(0, 1), budget)
    assert abs(result.value - expected) < mpf(10) ** -18


def test_tail_majorant_dominates_a_far_slice():
    bound = cusp_tail_majorant(2, 1, mpf(0), mpf(3))
    assert 0 < bound < mpf(10) ** -7


def test_depth_three_is_out_of_range(budget):
    factors = [IntegrandFactor(kind="cusp", k=2)] * 3
    with pytest.raises(OracleLimitError):
        quad_oracle(factors, PathSpec(start=mpc(0, 1)), budget)


def test_infinite_path_needs_a_damped_top_factor(budget):
    with pytest.raises(DivergentIntegralError):
        quad_oracle([IntegrandFactor(kind="const", k=2)], PathSpec(start=mpc(0, 1)), budget)


def test_infinite_path_cannot_start_at_the_cusp(budget):
    with pytest.raises(ValueError):
        quad_oracle([IntegrandFactor(kind="cusp", k=2)], PathSpec(start=mpc(0)), budget)


def test_finite_path_must_go_up(budget):
    with pytest.raises(ValueError):
        quad_oracle([IntegrandFactor(kind="unit")], PathSpec(start=mpc(0, 1), end=mpc(1, 2)), budget)


def test_panel_budget():
    path = PathSpec(start=mpc(0, 1), max_panels=2)
    with pytest.raises(OracleLimitError):
        quad_oracle([IntegrandFactor(kind="cusp", k=2)], path, TruncationBudget())


def test_steep_panels_are_refined_until_the_rules_agree(budget):
    # (iy)^(-21) i = y^(-21) on [0.005i, i]; the pole at 0 makes the first panel too wide
    path = PathSpec(start=mpc(0, "0.005"), end=mpc(0, 1))
    result = quad_oracle([IntegrandFactor(kind="unit", alpha=-20)], path, budget)
    y0 = mpc(path.start).imag
    exact = (y0**-20 - 1) / 20
    assert result.panels > 5
    assert abs(result.value - exact) < abs(exact) * mpf(10) ** -30
    assert result.error_estimate < abs(exact) * mpf(10) ** -30


def test_smooth_path_reports_a_small_error_estimate(budget):
    result = quad_oracle([IntegrandFactor(kind="cusp", k=2, alpha=1)], PathSpec(start=mpc(0, 1)), budget)
    assert result.error_estimate < mpf(10) ** -30


def test_unreachable_tolerance_exhausts_the_panel_budget(budget):
    path = PathSpec(start=mpc(0, 1), max_panels=20, tolerance=1e-80)
    with pytest.raises(OracleLimitError):
        quad_oracle([IntegrandFactor(kind="cusp", k=2)], path, budget)


def test_warming_caches_both_rules():
    warm_quadrature(4)
    assert len(standard_nodes(5, mp.prec)) == 2 * len(standard_nodes(4, mp.prec))
