"""Exhaustive oracles, exact laws, split independence, total variation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgtrees import (
    EnumerationError,
    PLANTED_CAP,
    UNROOTED_CAP,
    WeightSequence,
    enumerate_planted,
    enumerate_unrooted,
    exact_law_approx,
    exact_law_planted,
    exact_law_unrooted,
    split_independence_report,
    split_size_law,
    tree_weight,
    tv_distance,
)

positive_rationals = st.fractions(min_value=Fraction(1, 8), max_value=4, max_denominator=8)


class TestEnumeration:
    def test_planted_counts_are_catalan(self):
        assert [len(enumerate_planted(n)) for n in range(1, 9)] == [1, 1, 2, 5, 14, 42, 132, 429]

    def test_unrooted_counts_all_ones(self):
        assert [len(enumerate_unrooted(n)) for n in range(2, 9)] == [1, 1, 2, 3, 6, 14, 34]

    def test_caps_enforced(self):
        with pytest.raises(EnumerationError):
            enumerate_planted(PLANTED_CAP + 1)
        with pytest.raises(EnumerationError):
            enumerate_unrooted(UNROOTED_CAP + 1)
        with pytest.raises(EnumerationError):
            enumerate_planted(0)

    def test_unrooted_objects_are_distinct(self):
        us = enumerate_unrooted(7)
        assert len({u.canonical_code for u in us}) == len(us)


class TestExactLaws:
    def test_planted_law_uniform_for_ones(self, w_ones):
        law = exact_law_planted(w_ones, 5)
        assert len(law.support) == 14
        assert all(p == Fraction(1, 14) for p in law.probs)

    def test_planted_law_drops_zero_weight_atoms(self, w_even):
        law = exact_law_planted(w_even, 5)
        # only trees with out-degrees in {0, 2}
        assert all(set(code) <= {0, 2} for code in law.support)
        assert sum(law.probs) == 1

    def test_unrooted_law_all_ones_n4(self, w_ones):
        law = exact_law_unrooted(w_ones, 4)
        # path and star; the path carries 2/3 hmm: weights are all one, so
        # the law is uniform over the two shapes
        assert len(law.support) == 2
        assert all(p == Fraction(1, 2) for p in law.probs)

    def test_approx_law_matches_unrooted_when_tv_zero(self, w_path):
        for n in (4, 5, 6):
            assert tv_distance(exact_law_unrooted(w_path, n), exact_law_approx(w_path, n)) == 0

    def test_approx_law_is_a_probability(self, w_ones):
        law = exact_law_approx(w_ones, 6)
        assert sum(law.probs) == 1
        assert all(p > 0 for p in law.probs)

    def test_split_size_law_frozen_n4(self, w_ones):
        assert split_size_law(w_ones, 4) == {
            1: Fraction(2, 5),
            2: Fraction(1, 5),
            3: Fraction(2, 5),
        }

    def test_tv_distance_bounds(self, w_ones):
        a = exact_law_unrooted(w_ones, 6)
        b = exact_law_approx(w_ones, 6)
        tv = tv_distance(a, b)
        assert 0 <= tv <= 1
        assert tv_distance(a, a) == 0


class TestSplitIndependence:
    def test_exact_for_all_sequences(self, sequences):
        for w in sequences.values():
            for n in w.admissible_sizes(7):
                rep = split_independence_report(w, n)
                assert rep.exact, (w.describe(), n, rep.max_discrepancy)
                assert rep.max_discrepancy == 0

    @given(a=positive_rationals, b=positive_rationals)
    @settings(max_examples=20)
    def test_conditioned_laws_are_tilt_invariant(self, a, b):
        w = WeightSequence.geometric(Fraction(1))
        t = w.tilt(a, b)
        for n in (4, 6):
            assert exact_law_planted(w, n).as_dict() == exact_law_planted(t, n).as_dict()
            assert exact_law_unrooted(w, n).as_dict() == exact_law_unrooted(t, n).as_dict()
            assert split_size_law(w, n) == split_size_law(t, n)

    def test_zero_mass_size_raises(self, w_even):
        with pytest.raises(EnumerationError):
            exact_law_unrooted(w_even, 3)


class TestOracleTotals:
    def test_oracle_weight_totals_match_series(self, sequences):
        from sgtrees import planted_series, unrooted_series

        for w in sequences.values():
            T = planted_series(w, 1, 8).coeffs
            Z = unrooted_series(w, 8).coeffs
            for n in range(1, 9):
                total = sum((tree_weight(t, w) for t in enumerate_planted(n)), Fraction(0))
                assert total == T[n]
            for n in range(2, 9):
                total = sum((tree_weight(u, w) for u in enumerate_unrooted(n)), Fraction(0))
                assert total == Z[n]
