"""Tests for fib_lab."""

import pytest

from alpha_oracle import PHI
from brain_scan import BrainKind, brain_sequence
from fib_lab import (
    FibSequence,
    binet_round,
    binet_round_check,
    fib_additive,
    fib_via_train,
    ratio_chain_check,
)


class TestFibViaTrain:
    """Fibonacci numbers from the nearest-integer map."""

    def test_first_sixteen(self):
        assert fib_via_train(16).terms == (1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597)

    def test_matches_additive_recurrence(self):
        sequence = fib_via_train(90)
        assert sequence.satisfies_recurrence()
        assert sequence == fib_additive(90)

    def test_single_term(self):
        assert fib_via_train(1).terms == (1,)

    def test_invalid_length(self):
        with pytest.raises(ValueError):
            fib_via_train(0)

    def test_term_is_one_indexed(self):
        sequence = fib_via_train(16)
        assert sequence.term(1) == 1
        assert sequence.term(16) == 1597
        with pytest.raises(IndexError):
            sequence.term(17)


class TestFibAdditive:
    def test_seeds(self):
        assert fib_additive(2).terms == (1, 2)
        assert fib_additive(1).terms == (1,)

    def test_recurrence_detects_breaks(self):
        assert not FibSequence((1, 2, 4, 6)).satisfies_recurrence()


class TestBinet:
    """Rounding identity F_n = [phi^(n+1) / sqrt(5)]."""

    @pytest.mark.parametrize('n, expected', [(1, 1), (2, 2), (15, 987), (16, 1597)])
    def test_known_values(self, n, expected):
        assert binet_round(n) == expected

    def test_check_to_ninety(self):
        report = binet_round_check(90)
        assert report.passed
        assert report.checked == 90


class TestRatioChain:
    def test_ratios_are_second_kind_approximations(self):
        approximations = brain_sequence(PHI, 1000, BrainKind.II).fractions
        assert ratio_chain_check(fib_via_train(16), approximations)

    def test_mismatch(self):
        approximations = brain_sequence(PHI, 1000, BrainKind.II).fractions
        assert not ratio_chain_check(FibSequence((1, 3, 4)), approximations)
