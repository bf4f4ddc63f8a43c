"""Tests for cf_engine: RCF/NICF expansions, convergents and semiconvergents."""

from fractions import Fraction

import pytest

from alpha_oracle import E, PHI, PI, Ratio, enclosure, sqrt_spec
from brain_scan import BrainKind, brain_sequence
from cf_engine import (
    CFAlgorithm,
    ExpansionError,
    PartialQuotient,
    best_convergents,
    convergents,
    convergents_of,
    expansion_up_to,
    first_kind_from_cf,
    is_subsequence,
    nicf_expand,
    rcf_convergents_up_to,
    rcf_expand,
    reconstruct_base,
    semiconvergent_candidates,
)
from train_core import certify_nearest


def ratios(*pairs):
    return [Ratio(p, q) for p, q in pairs]


class TestRegularExpansion:
    """Test RCF partial quotients and convergents."""

    def test_pi_quotients(self):
        expansion = rcf_expand(PI, 6)
        assert [pq.value for pq in expansion.quotients] == [3, 7, 15, 1, 292, 1]
        assert all(pq.sign == 1 for pq in expansion.quotients)
        assert expansion.render_quotients() == '3; +7, +15, +1, +292, +1'

    def test_pi_convergents(self):
        conv = rcf_expand(PI, 6).convergents
        assert list(conv[:4]) == ratios((3, 1), (22, 7), (333, 106), (355, 113))
        assert conv[4] == Ratio(103993, 33102)
        assert conv[4].p == certify_nearest(PI, 33102).nearest_qa

    def test_e_quotients(self):
        expansion = rcf_expand(E, 11)
        assert [pq.value for pq in expansion.quotients] == [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1]

    @pytest.mark.parametrize('d, expected', [(2, [1, 2, 2, 2, 2, 2, 2, 2]), (3, [1, 1, 2, 1, 2, 1, 2, 1])])
    def test_square_roots_are_periodic(self, d, expected):
        assert [pq.value for pq in rcf_expand(sqrt_spec(d), 8).quotients] == expected

    def test_phi_single_term(self):
        expansion = rcf_expand(PHI, 1)
        assert expansion.render_quotients() == '1'
        assert list(expansion.convergents) == [Ratio(1, 1)]

    def test_phi_is_all_ones(self):
        assert all(pq.value == 1 for pq in rcf_expand(PHI, 20).quotients)

    def test_terms_must_be_positive(self):
        with pytest.raises(ExpansionError):
            rcf_expand(PI, 0)

    def test_convergent_numerators_are_nearest_integers(self):
        expansion = rcf_expand(PI, 8)
        for convergent in expansion.convergents[1:]:
            assert convergent.p == certify_nearest(PI, convergent.q).nearest_qa

    def test_tails_reconstruct_alpha(self):
        expansion = rcf_expand(PI, 6)
        assert len(expansion.tail_intervals) == 6
        assert reconstruct_base(expansion) == expansion.base
        assert expansion.base.intersects(enclosure(PI, Fraction(1, 10 ** 20)))


class TestNearestIntegerExpansion:
    """Test NICF with signed partial quotients."""

    def test_pi_convergents(self):
        expansion = nicf_expand(PI, 4)
        assert list(expansion.convergents) == ratios((3, 1), (22, 7), (355, 113), (104348, 33215))

    def test_pi_signs(self):
        expansion = nicf_expand(PI, 4)
        assert [(pq.value, pq.sign) for pq in expansion.quotients] == [(3, 1), (7, 1), (16, 1), (294, -1)]
        assert expansion.render_quotients() == '3; +7, +16, -294'

    def test_phi(self):
        expansion = nicf_expand(PHI, 3)
        assert list(expansion.convergents) == ratios((2, 1), (5, 3), (13, 8))
        assert [(pq.value, pq.sign) for pq in expansion.quotients] == [(2, 1), (3, -1), (3, -1)]

    @pytest.mark.parametrize('alpha', [PI, PHI, E, sqrt_spec(2), sqrt_spec(3)])
    def test_nicf_within_rcf(self, alpha):
        nicf = [c for c in expansion_up_to(alpha, 10 ** 6, CFAlgorithm.NICF).convergents if c.q <= 10 ** 6]
        rcf = [c for c in expansion_up_to(alpha, 10 ** 6).convergents if c.q <= 10 ** 6]
        assert is_subsequence(nicf, rcf)

    def test_algorithm_parse(self):
        assert CFAlgorithm.parse('NICF') is CFAlgorithm.NICF
        with pytest.raises(ExpansionError):
            CFAlgorithm.parse('gauss')


class TestConvergentRecurrence:
    def test_signed_recurrence(self):
        quotients = [PartialQuotient(2), PartialQuotient(3, -1), PartialQuotient(3, -1)]
        assert convergents_of(quotients) == ratios((2, 1), (5, 3), (13, 8))

    def test_empty_rejected(self):
        with pytest.raises(ExpansionError):
            convergents_of([])

    def test_convergents_of_expansion(self):
        expansion = rcf_expand(sqrt_spec(2), 4)
        assert convergents(expansion) == ratios((1, 1), (3, 2), (7, 5), (17, 12))


class TestBestApproximations:
    """Convergents against kind II, semiconvergents against kind I."""

    @pytest.mark.parametrize('alpha', [PI, PHI, sqrt_spec(2), sqrt_spec(3), E])
    def test_convergents_equal_second_kind(self, alpha):
        assert rcf_convergents_up_to(alpha, 1000) == brain_sequence(alpha, 1000, BrainKind.II).fractions

    @pytest.mark.parametrize('alpha', [PI, PHI, sqrt_spec(2), E])
    def test_semiconvergents_give_first_kind(self, alpha):
        assert first_kind_from_cf(alpha, 1000) == brain_sequence(alpha, 1000, BrainKind.I).fractions

    def test_pi_first_kind_includes_semiconvergents(self):
        fractions = first_kind_from_cf(PI, 1000)
        assert len(fractions) == 14
        assert Ratio(179, 57) in fractions
        assert fractions[-1] == Ratio(355, 113)

    def test_phi_drops_leading_convergent(self):
        expansion = expansion_up_to(PHI, 10)
        assert best_convergents(expansion, 10) == ratios((2, 1), (3, 2), (5, 3), (8, 5), (13, 8))

    def test_candidates_in_denominator_order(self):
        candidates = semiconvergent_candidates(expansion_up_to(PI, 1000), 1000)
        denominators = [c.q for c in candidates]
        assert denominators == sorted(denominators)
        assert denominators[-1] <= 1000

    def test_bound_must_be_positive(self):
        with pytest.raises(ExpansionError):
            first_kind_from_cf(PI, 0)


class TestIsSubsequence:
    def test_order_matters(self):
        assert is_subsequence(ratios((1, 1), (3, 2)), ratios((1, 1), (2, 1), (3, 2)))
        assert not is_subsequence(ratios((3, 2), (1, 1)), ratios((1, 1), (2, 1), (3, 2)))
