from fractions import Fraction

import pytest

from eisenstein_mmv.shared_libraries.core_algebra import (
    FormalSum,
    falling_factorial,
    factorial_ratio,
    format_formal_sum,
    format_generator,
    format_rational,
    fs_combine,
    fs_sum,
    lseries,
    make_index,
    parse_formal_sum,
    parse_generator,
    parse_rational,
    tau_integral,
)
from eisenstein_mmv.shared_libraries.errors import InvalidIndexError


class TestCompositeIndex:
    def test_weights_and_word(self):
        index = make_index([2, 3], [1, 4], t=2)
        assert index.depth == 2
        assert index.upper_weight == 5
        assert index.word == ((2, 1), (3, 4))
        assert index.with_t(0).t == 0

    @pytest.mark.parametrize(
        "ks, alphas, t",
        [([2, 3], [1], 0), ([1], [1], 0), ([2], [0], 0), ([2], [1], -1)],
    )
    def test_rejects_out_of_range(self, ks, alphas, t):
        with pytest.raises(InvalidIndexError):
            make_index(ks, alphas, t)

    def test_indices_are_hashable_and_compare_by_value(self):
        assert make_index([2], [1]) == make_index((2,), (1,))
        assert len({make_index([2], [1]), make_index([2], [1])}) == 1


class TestGenerators:
    def test_lower_weight_counts_the_shift(self):
        assert lseries([2, 2], [1, 3], 2).lower_weight == 6
        assert tau_integral([2], [2], 1).lower_weight == 3

    def test_tau_integral_rejects_negative_power(self):
        with pytest.raises(InvalidIndexError):
            tau_integral([2], [1], -1)


class TestFormalSum:
    def test_zero_coefficients_are_pruned(self):
        g = lseries([2], [1])
        fs = fs_combine(FormalSum.of(g, 3), FormalSum.of(g, 3), -1)
        assert not fs
        assert len(fs) == 0
        assert fs.length == 0

    def test_linear_combinations_are_exact(self):
        g1, g2 = lseries([2], [1]), lseries([3], [2])
        fs = FormalSum({g1: Fraction(1, 3), g2: 2}) + FormalSum.of(g1, Fraction(2, 3))
        assert fs.coefficient(g1) == 1
        assert fs.coefficient(g2) == 2
        assert (-fs).coefficient(g2) == -2
        assert (Fraction(1, 2) * fs).coefficient(g1) == Fraction(1, 2)

    def test_fs_sum_merges_terms(self):
        g = tau_integral([2], [1])
        assert fs_sum([FormalSum.of(g), FormalSum.of(g, 2)]) == FormalSum.of(g, 3)

    def test_iteration_is_ordered(self):
        fs = FormalSum({tau_integral([2], [1]): 1, lseries([3], [1]): 1, lseries([2], [2]): 1})
        kinds = [g.kind for g, _ in fs]
        assert kinds == ["L", "L", "I"]

    def test_filtration_degrees(self):
        fs = FormalSum({lseries([2, 3], [1, 1], 1): 1, lseries([4], [5]): 1})
        assert fs.length == 2
        assert fs.upper_weight == 5
        assert fs.lower_weight == 5


class TestFactorials:
    def test_falling_factorial(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(5, 0) == 1

    def test_factorial_ratio(self):
        assert factorial_ratio(5, 3) == 20
        assert factorial_ratio(3, 5) == Fraction(1, 20)


class TestTextualSyntax:
    def test_rational_literals(self):
        assert format_rational(Fraction(-3, 4)) == "-3/4"
        assert format_rational(Fraction(2)) == "2/1"
        assert parse_rational(" -3/4 ") == Fraction(-3, 4)
        with pytest.raises(ValueError):
            parse_rational("3/0")

    def test_generator_literals(self):
        g = lseries([2, 3], [1, 2])
        assert format_generator(g) == "L{ks=[2,3];alphas=[1,2];t=0}"
        assert parse_generator("I{ks=[2];alphas=[3];taupow=1}") == tau_integral([2], [3], 1)
        assert parse_generator(" L{ ks = [2, 3] ; alphas = [1, 2] ; t = 0 } ") == g

    @pytest.mark.parametrize(
        "text",
        [
            "L{ks=[2];alphas=[1];taupow=0}",
            "I{ks=[2];alphas=[1];t=0}",
            "X{ks=[2];alphas=[1];t=0}",
            "L{ks=[1];alphas=[1];t=0}",
        ],
    )
    def test_bad_generator_literals(self, text):
        with pytest.raises(InvalidIndexError):
            parse_generator(text)

    def test_formal_sum_text(self):
        fs = FormalSum({lseries([2], [1], 1): -1, lseries([2], [2]): 1})
        text = format_formal_sum(fs)
        assert text == "-1/1*L{ks=[2];alphas=[1];t=1} + 1/1*L{ks=[2];alphas=[2];t=0}"
        assert parse_formal_sum(text) == fs
        assert format_formal_sum(FormalSum()) == "0"
        assert not parse_formal_sum("0")
