from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf
from pydantic import ValidationError

from eisenstein_mmv.engines.mmv import (
    PRINTED,
    REDERIVED,
    BiPolynomial,
    R_cusp_gamma,
    R_iter,
    S_coeff,
    T_const_closed,
    T_const_const,
    T_cusp_quadrature,
    T_cusp_reg,
    const,
    cusp,
    e0_cocycle_S,
    first_difference_lhs,
    first_difference_rhs,
    haberland_rhs,
    int0_reg,
    int0_reg_inverted,
    l_value_at_zero,
    request,
    rho,
    zeta_odd,
)
from eisenstein_mmv.shared_libraries.core_algebra import make_index
from eisenstein_mmv.shared_libraries.errors import (
    DivergentIntegralError,
    InvalidIndexError,
    SingularExponentError,
)
from eisenstein_mmv.shared_libraries.precision import i_power


def close(a, b, rel):
    return abs(a - b) <= rel * max(1, abs(b))


class TestRequests:
    def test_reflection_and_swap(self):
        req = request([2, 3], [1, 4])
        assert req.reflected() == request([2, 3], [3, 2])
        assert req.swapped() == request([3, 2], [4, 1])
        assert req.weight_exponent == 8
        assert req.binomial() == 4

    @pytest.mark.parametrize("ks, alphas", [([2], [0]), ([2], [4]), ([2, 2, 2], [1, 1, 1]), ([1], [1])])
    def test_out_of_range_requests(self, ks, alphas):
        with pytest.raises(ValidationError):
            request(ks, alphas)


class TestRationalCocycle:
    def test_weight_four(self):
        assert e0_cocycle_S(2) == BiPolynomial(2, {(1, 1): Fraction(1, 144)})

    def test_weight_six(self):
        expected = BiPolynomial(4, {(1, 3): Fraction(-1, 720), (3, 1): Fraction(-1, 720)})
        assert e0_cocycle_S(3) == expected

    def test_degree_is_enforced(self):
        with pytest.raises(ValueError):
            BiPolynomial(2, {(2, 1): 1})
        with pytest.raises(ValueError):
            e0_cocycle_S(2).coefficient(3, 0)


class TestZeta:
    @pytest.mark.parametrize("s", [3, 5, 11])
    def test_matches_mpmath(self, s, budget):
        assert abs(zeta_odd(s, budget) - mpmath.zeta(s)) < mpf(10) ** -38

    def test_even_argument_rejected(self, budget):
        with pytest.raises(InvalidIndexError):
            zeta_odd(4, budget)


class TestHaberland:
    def test_weight_four_anchors(self, budget):
        zeta3 = mpmath.zeta(3)
        assert close(S_coeff(request([2], [1]), budget), zeta3, 1e-12)
        assert close(S_coeff(request([2], [3]), budget), -zeta3, 1e-12)
        assert close(S_coeff(request([2], [2]), budget), (2 * mp.pi * mpc(0, 1)) ** 3 / 144, 1e-12)

    def test_zeta3_decimal_anchor(self, budget):
        assert abs(S_coeff(request([2], [1]), budget) - mpf("1.202056903159594285399738161511449990765")) < 1e-12

    @pytest.mark.parametrize("k", [3, 4])
    def test_full_weight(self, k, budget):
        for alpha in range(1, 2 * k):
            lhs = S_coeff(request([k], [alpha]), budget)
            assert close(lhs, haberland_rhs(k, alpha, budget), 1e-12), alpha


class TestDepthOnePrimitives:
    def test_constant_integral(self):
        assert abs(T_const_closed(2, 2) + mpf(1) / 480) < mpf(10) ** -40
        with pytest.raises(SingularExponentError):
            T_const_closed(2, 0)

    def test_gamma_series_agrees_with_closed_form(self, budget):
        for beta in (1, 2, 3):
            assert close(R_cusp_gamma(2, beta, budget), rho(2, beta, budget), 1e-30)

    def test_negative_exponents_use_incomplete_gamma(self, budget):
        value = rho(2, -1, budget)
        assert value == R_cusp_gamma(2, -1, budget)
        assert abs(value) > 0

    def test_regularization_agrees_with_convergent_quadrature(self, budget):
        assert abs(T_cusp_reg(2, 5, budget) - T_cusp_quadrature(2, 5, budget)) < 1e-15

    def test_regularization_singularities(self, budget):
        with pytest.raises(SingularExponentError) as info:
            T_cusp_reg(2, 4, budget)
        assert info.value.exponent == 4
        with pytest.raises(DivergentIntegralError):
            T_cusp_quadrature(2, 4, budget)

    def test_const_const_exponent_rule(self):
        c = mpf(1) / 240 * (-mpf(1) / 504)
        assert abs(T_const_const(2, 3, 1, 2) - c * i_power(3) / 3) < mpf(10) ** -40
        with pytest.raises(SingularExponentError):
            T_const_const(2, 3, 1, -1)


class TestRIntegrals:
    def test_constant_needs_negative_exponent(self, budget):
        with pytest.raises(DivergentIntegralError):
            R_iter([const(2)], [1], budget)
        assert abs(R_iter([const(2)], [-2], budget) + mpf(1) / 480) < mpf(10) ** -40

    def test_mixed_depth_two(self, budget):
        value = R_iter([const(2), cusp(3)], [1, 2], budget)
        expected = mpf(1) / 240 * (rho(3, 3, budget) - mpc(0, 1) * rho(3, 2, budget))
        assert abs(value - expected) < mpf(10) ** -38

    def test_bad_arity(self, budget):
        with pytest.raises(InvalidIndexError):
            R_iter([cusp(2)], [1, 2], budget)


class TestValuesAtZero:
    def test_mellin_anchor(self):
        assert abs(l_value_at_zero(2, 2) - mpf(1) / 288) < mpf(10) ** -38

    @pytest.mark.parametrize("k, m", [(2, 2), (2, 3), (2, 5), (3, 4), (3, 7)])
    def test_regularized_value_matches_mellin(self, k, m, budget):
        assert close(int0_reg(make_index([k], [m]), budget), l_value_at_zero(k, m), 1e-15)

    def test_mellin_singularity(self):
        with pytest.raises(SingularExponentError) as info:
            l_value_at_zero(3, 6)
        assert info.value.exponent == 6

    def test_two_depth_two_assemblies_agree(self, budget):
        index = make_index([2, 3], [1, 2])
        assert close(int0_reg(index, budget), int0_reg_inverted(index, budget), 1e-12)

    def test_shuffle_relation_at_zero(self, budget):
        j12 = int0_reg(make_index([2, 3], [3, 2]), budget)
        j21 = int0_reg(make_index([3, 2], [2, 3]), budget)
        j1 = int0_reg(make_index([2], [3]), budget)
        j2 = int0_reg(make_index([3], [2]), budget)
        assert close(j12 + j21, j1 * j2, 1e-12)

    def test_depth_two_singularity(self, budget):
        with pytest.raises(SingularExponentError):
            int0_reg(make_index([2, 3], [1, 3]), budget)


class TestDepthTwoIdentities:
    def test_symmetry(self, budget):
        req = request([2, 3], [1, 2])
        lhs = S_coeff(req, budget)
        rhs = -S_coeff(req.reflected().swapped(), budget)
        assert abs(lhs - rhs) < 1e-10 * (2 * mp.pi) ** 8

    def test_first_difference_rederived(self, budget):
        req = request([2, 3], [1, 1])
        lhs = first_difference_lhs(req, budget)
        rhs = first_difference_rhs(req, REDERIVED, budget)
        assert abs(lhs - rhs) < 1e-10 * (2 * mp.pi) ** 8

    def test_first_difference_variants(self, budget):
        req = request([2, 3], [1, 1])
        with pytest.raises(ValueError):
            first_difference_rhs(req, "other", budget)
        with pytest.raises(InvalidIndexError):
            first_difference_rhs(request([2], [1]), PRINTED, budget)
