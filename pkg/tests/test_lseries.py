import logging
from fractions import Fraction

import pandas as pd
import pytest
from mpmath import mpc, mpf

from eisenstein_mmv.engines.integrals import int_eval
from eisenstein_mmv.engines.lseries import (
    coefficient_degree,
    export_coefficients,
    l_coeffs_bruteforce,
    l_coeffs_dp,
    l_eval,
    l_eval_certified,
    tau_power,
)
from eisenstein_mmv.shared_libraries.core_algebra import make_index
from eisenstein_mmv.shared_libraries.errors import InvalidIndexError, OracleLimitError


def test_depth_one_coefficients():
    coeffs = l_coeffs_dp(make_index([2], [1]), 3)
    assert coeffs.coeffs == (Fraction(1), Fraction(9, 2), Fraction(28, 3))
    assert coeffs.c(2) == Fraction(9, 2)


def test_depth_two_coefficients():
    coeffs = l_coeffs_dp(make_index([2, 2], [1, 1]), 3)
    assert coeffs.coeffs == (Fraction(0), Fraction(1, 2), Fraction(9, 2))


def test_t_is_ignored_by_the_coefficient_table():
    assert l_coeffs_dp(make_index([3], [2], t=2), 10) == l_coeffs_dp(make_index([3], [2]), 10)


@pytest.mark.parametrize(
    "ks, alphas",
    [([2], [3]), ([2, 3], [2, 1]), ([3, 2], [1, 2]), ([2, 2, 2], [1, 2, 1]), ([2, 2, 3, 2], [1, 1, 1, 1])],
)
def test_dp_matches_bruteforce(ks, alphas):
    index = make_index(ks, alphas)
    assert l_coeffs_dp(index, 30) == l_coeffs_bruteforce(index, 30)


def test_bruteforce_guard():
    with pytest.raises(OracleLimitError):
        l_coeffs_bruteforce(make_index([2], [1]), 201)
    with pytest.raises(OracleLimitError):
        l_coeffs_bruteforce(make_index([2] * 5, [1] * 5), 10)


def test_empty_index_has_no_coefficient_table():
    with pytest.raises(InvalidIndexError):
        l_coeffs_dp(make_index([], []), 10)


def test_coefficient_degree():
    assert coefficient_degree(make_index([2, 3], [1, 1])) == 11


def test_depth_zero_is_a_power_of_tau():
    tau = mpc(0.5, 2)
    assert l_eval(make_index([], [], t=2), tau, None) == tau**2
    assert tau_power(tau, 0) == 1


def test_l_series_is_minus_the_single_integral(budget):
    tau = mpc(0.25, 1)
    index = make_index([2], [1])
    assert abs(l_eval(index, tau, budget) + int_eval(index, tau, budget)) < mpf(10) ** -38


def test_tau_power_multiplies_the_series(budget):
    tau = mpc(-0.5, 1.5)
    base = l_eval(make_index([2, 3], [1, 2]), tau, budget)
    shifted = l_eval(make_index([2, 3], [1, 2], t=1), tau, budget)
    assert abs(shifted - tau * base) < mpf(10) ** -38


def test_certified_bound_is_below_eps(budget):
    value, bound, n = l_eval_certified(make_index([2, 2], [1, 1]), mpc(0, 1), budget)
    assert bound < budget.eps
    assert n > 1
    longer = l_eval(make_index([2, 2], [1, 1]), mpc(0, 1), budget.model_copy(update={"eps": 1e-60}))
    assert abs(longer - value) < budget.eps


def test_small_imaginary_part_warns(budget, caplog):
    with caplog.at_level(logging.WARNING, logger="eisenstein_mmv.engines.lseries"):
        l_eval(make_index([2], [2]), mpc(0.5, 0.05), budget)
    assert "is small" in caplog.text


def test_export_coefficients(tmp_path):
    path = tmp_path / "coeffs.csv"
    export_coefficients(l_coeffs_dp(make_index([2], [1]), 3), str(path))
    frame = pd.read_csv(path, dtype=str)
    assert list(frame.columns) == ["m", "c"]
    assert frame["c"].tolist() == ["1/1", "9/2", "28/3"]
