"""Samplers: determinism, cycle rotation, exchange correctness, exact laws."""

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scipy_stats

from sgtrees import (
    PlantedTree,
    RetryBudgetError,
    RngStream,
    SamplingError,
    WeightSequence,
    boltzmann_planted_law,
    exact_law_planted,
    exact_law_unrooted,
    sample_conditioned_gw,
    sample_conditioned_gw_batch,
    sample_pair_split,
    sample_planted,
    sample_unrooted_approx,
    sample_unrooted_exact,
    sample_unrooted_exact_counts,
    sampling_offspring,
    split_size_law,
    tree_weight,
)
from sgtrees.sampling import (
    _big_jump_batch,
    _rejection_batch,
    code_key,
    rotate_to_code,
    smaller_split_component_counts,
    split_table,
)


def chi_square_p(observed: dict, law, draws: int, n: int) -> float:
    keys = [code_key(code, n) for code in law.support]
    obs = np.array([observed.get(k, 0) for k in keys], dtype=float)
    assert obs.sum() == draws
    exp = np.array([float(p) for p in law.probs]) * draws
    dof = len(keys) - 1
    if dof == 0:
        return 1.0
    stat = ((obs - exp) ** 2 / exp).sum()
    return float(scipy_stats.chi2.sf(stat, dof))


class TestRngStream:
    def test_generator_is_deterministic(self):
        a = RngStream(123).generator().random(5)
        b = RngStream(123).generator().random(5)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(123, 0).generator().random(5)
        b = RngStream(123, 1).generator().random(5)
        assert not np.array_equal(a, b)

    def test_batch_determinism(self, w_ones):
        xi = sampling_offspring(w_ones)
        a = sample_conditioned_gw_batch(xi, 9, 50, RngStream(7))
        b = sample_conditioned_gw_batch(xi, 9, 50, RngStream(7))
        assert np.array_equal(a, b)


class TestCycleRotation:
    def test_frozen_example(self):
        assert list(rotate_to_code(np.array([0, 2, 0]))) == [2, 0, 0]

    @given(
        vals=st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=9)
    )
    def test_rotation_yields_valid_code(self, vals):
        n = len(vals)
        total = sum(vals)
        if total != n - 1:
            # rescale impossible; only test admissible vectors
            return
        code = tuple(int(c) for c in rotate_to_code(np.array(vals)))
        PlantedTree(code)  # validates the Lukasiewicz property
        # result is a rotation of the input
        doubled = list(vals) + list(vals)
        assert any(tuple(doubled[i : i + n]) == code for i in range(n))


class TestConditionedGw:
    def test_uniform_over_catalan_codes(self, w_ones):
        xi = sampling_offspring(w_ones)
        draws = 60000
        codes = sample_conditioned_gw_batch(xi, 6, draws, RngStream(11))
        uniq, counts = np.unique(codes, axis=0, return_counts=True)
        assert len(uniq) == 42
        exp = draws / 42
        stat = ((counts - exp) ** 2 / exp).sum()
        assert scipy_stats.chi2.sf(stat, 41) > 1e-3

    def test_two_point_matches_exact_law(self, w_even):
        xi = sampling_offspring(w_even)
        draws = 40000
        codes = sample_conditioned_gw_batch(xi, 7, draws, RngStream(12))
        law = exact_law_planted(w_even, 7)
        observed = Counter(code_key(tuple(int(c) for c in row), 7) for row in codes)
        assert chi_square_p(observed, law, draws, 7) > 1e-3

    def test_rejection_matches_exact_law(self):
        w = WeightSequence.explicit([1, 1, 1])
        xi = sampling_offspring(w)
        draws = 40000
        codes = sample_conditioned_gw_batch(xi, 6, draws, RngStream(13))
        law = exact_law_planted(w, 6)
        observed = Counter(code_key(tuple(int(c) for c in row), 6) for row in codes)
        assert chi_square_p(observed, law, draws, 6) > 1e-3

    def test_path_sampler_returns_the_path(self, w_path):
        t = sample_planted(w_path, 8, RngStream(1))
        assert t.code == (1, 1, 1, 1, 1, 1, 1, 0)

    def test_inadmissible_sizes_raise(self, w_even):
        xi = sampling_offspring(w_even)
        with pytest.raises(SamplingError):
            sample_conditioned_gw(xi, 4, RngStream(0))

    def test_semigroup_gap_detected(self):
        # support {0, 2, 3}: no tree of size 2 exists although span is 1
        w = WeightSequence.explicit([1, 0, 1, 1])
        xi = sampling_offspring(w)
        with pytest.raises(SamplingError):
            sample_conditioned_gw(xi, 2, RngStream(0))
        # size 3 works: one vertex with two leaves
        t = sample_conditioned_gw(xi, 3, RngStream(0))
        assert t.code == (2, 0, 0)

    def test_retry_budget_error_reports_rate(self):
        w = WeightSequence.explicit([1, 1, 1])
        xi = sampling_offspring(w)
        with pytest.raises(RetryBudgetError) as err:
            sample_conditioned_gw_batch(xi, 14, 10000, RngStream(3), retry_budget=64)
        assert 0 <= err.value.achieved_rate < 1
        assert err.value.proposals >= 64

    def test_big_jump_matches_rejection(self, w_pow3):
        # dispatch sends pow3 at n=50 through the big-jump exchange; compare
        # against plain rejection on summary statistics
        xi = sampling_offspring(w_pow3)
        n, m = 50, 4000
        gen = RngStream(17).generator()
        big = _big_jump_batch(xi, n, m, gen, 10 ** 9)
        rej = _rejection_batch(xi, n, m, RngStream(18).generator(), 10 ** 9)
        assert (big.sum(axis=1) == n - 1).all()
        assert (rej.sum(axis=1) == n - 1).all()
        ks = scipy_stats.ks_2samp(big.max(axis=1), rej.max(axis=1))
        assert ks.pvalue > 1e-3
        # leaf counts agree too
        ks2 = scipy_stats.ks_2samp((big == 0).sum(axis=1), (rej == 0).sum(axis=1))
        assert ks2.pvalue > 1e-3


class TestSplitSampling:
    def test_split_table_matches_exact_law(self, w_ones):
        probs = split_table(w_ones, 6)
        law = split_size_law(w_ones, 6)
        for a, p in law.items():
            assert abs(probs[a] - float(p)) < 1e-12
        assert abs(probs.sum() - 1) < 1e-12

    def test_pair_split_size_frequencies(self, w_ones):
        gen = RngStream(19).generator()
        draws = 20000
        sizes = Counter()
        for _ in range(draws):
            t1, t2 = sample_pair_split(w_ones, 5, gen)
            assert t1.size + t2.size == 5
            sizes[t1.size] += 1
        law = split_size_law(w_ones, 5)
        exp = np.array([float(law[a]) * draws for a in sorted(law)])
        obs = np.array([sizes[a] for a in sorted(law)], dtype=float)
        stat = ((obs - exp) ** 2 / exp).sum()
        assert scipy_stats.chi2.sf(stat, len(exp) - 1) > 1e-3

    def test_approx_sampler_produces_trees_of_right_size(self, w_ones):
        u = sample_unrooted_approx(w_ones, 9, RngStream(20))
        assert u.size == 9


class TestExactUnrooted:
    def test_chi_square_all_ones_n6(self, w_ones):
        draws = 200000
        counts = sample_unrooted_exact_counts(w_ones, 6, draws, RngStream(21))
        law = exact_law_unrooted(w_ones, 6)
        assert chi_square_p(counts, law, draws, 6) > 1e-3

    def test_chi_square_truncated_power_n7(self, sequences):
        w = sequences["pow3t"]
        draws = 200000
        counts = sample_unrooted_exact_counts(w, 7, draws, RngStream(22))
        law = exact_law_unrooted(w, 7)
        assert chi_square_p(counts, law, draws, 7) > 1e-3

    def test_single_draw_api(self, w_even):
        u = sample_unrooted_exact(w_even, 6, RngStream(23))
        assert u.size == 6
        degs = sorted(len(r) for r in u.neighbors)
        assert all(d in (1, 3) for d in degs)  # weight support forces odd degrees

    def test_inadmissible_raises(self, w_even):
        with pytest.raises(SamplingError):
            sample_unrooted_exact(w_even, 5, RngStream(0))


class TestBoltzmann:
    def test_all_ones_closed_form(self, w_ones):
        law = boltzmann_planted_law(w_ones, 6)
        for code, p in law.items():
            assert p == 2 * Fraction(1, 4) ** len(code)
        assert sum(law.values()) < 1

    def test_respects_tree_weights(self, sequences):
        w = sequences["geo13"]
        law = boltzmann_planted_law(w, 5)
        # ratio of same-size atoms equals ratio of tree weights
        a, b = PlantedTree((2, 0, 0)), PlantedTree((1, 1, 0))
        assert law[a.code] / law[b.code] == tree_weight(a, w) / tree_weight(b, w)


class TestSmallerComponent:
    def test_counts_add_up(self, w_ones):
        counts, oversize = smaller_split_component_counts(
            w_ones, 40, 5000, RngStream(25), max_size=6
        )
        assert sum(counts.values()) + oversize == 5000
        assert all(len(code) <= 6 for code in counts)
