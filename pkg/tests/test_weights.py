"""Weight sequences, offspring laws and their JSON wire format."""

import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgtrees import (
    OffspringDistribution,
    WeightError,
    WeightSequence,
    offspring_distribution,
    sampling_offspring,
    weights_from_json,
    weights_to_json,
)

rationals = st.fractions(min_value=0, max_value=4, max_denominator=12)
positive_rationals = st.fractions(min_value=Fraction(1, 12), max_value=4, max_denominator=12)


class TestWeightSequence:
    def test_explicit_trailing_zeros_stripped(self):
        w = WeightSequence.explicit([1, 2, 0, 0])
        assert w.weights == (Fraction(1), Fraction(2))
        assert w.support_max() == 1

    def test_explicit_rejects_empty_or_zero_start(self):
        with pytest.raises(WeightError):
            WeightSequence.explicit([0, 1])
        with pytest.raises(WeightError):
            WeightSequence.explicit([])

    def test_geometric_values(self):
        w = WeightSequence.geometric(Fraction(1, 3))
        assert [w.omega(k) for k in range(4)] == [
            Fraction(1),
            Fraction(1, 3),
            Fraction(1, 9),
            Fraction(1, 27),
        ]
        assert w.support_max() is None

    def test_power_values(self):
        w = WeightSequence.power(3)
        assert w.omega(0) == 1
        assert w.omega(1) == Fraction(1, 8)
        assert w.omega(3) == Fraction(1, 64)

    def test_poisson_values(self):
        w = WeightSequence.poisson(Fraction(2))
        assert [w.omega(k) for k in range(4)] == [
            Fraction(1),
            Fraction(2),
            Fraction(2),
            Fraction(4, 3),
        ]

    def test_truncation_zeroes_the_tail(self):
        w = WeightSequence.geometric(Fraction(1, 2), truncate=3)
        assert w.omega(3) == Fraction(1, 8)
        assert w.omega(4) == 0
        assert w.support_max() == 3

    def test_span_examples(self):
        assert WeightSequence.geometric(Fraction(1)).span == 1
        assert WeightSequence.explicit([1, 0, 1]).span == 2
        assert WeightSequence.explicit([1, 0, 0, 2, 0, 0, 1]).span == 3
        assert WeightSequence.explicit([1, 0, 1, 1]).span == 1

    def test_span_needs_positive_arity(self):
        with pytest.raises(WeightError):
            _ = WeightSequence.explicit([5]).span

    def test_tilt_scales_weights(self):
        w = WeightSequence.explicit([1, 1, 1]).tilt(Fraction(3), Fraction(1, 2))
        assert w.omega(0) == 3
        assert w.omega(1) == Fraction(3, 2)
        assert w.omega(2) == Fraction(3, 4)

    @given(a=positive_rationals, b=positive_rationals)
    def test_tilt_preserves_span_and_support(self, a, b):
        w = WeightSequence.explicit([1, 0, 2, 0, 1])
        t = w.tilt(a, b)
        assert t.span == w.span
        assert [k for k in range(5) if t.omega(k) > 0] == [
            k for k in range(5) if w.omega(k) > 0
        ]

    def test_pow_weights_squares_componentwise(self):
        w = WeightSequence.explicit([1, 2, 3])
        w2 = w.pow_weights(2, cap=4)
        assert [w2.omega(k) for k in range(3)] == [Fraction(1), Fraction(4), Fraction(9)]

    def test_admissible_sizes(self, sequences):
        assert sequences["ones"].admissible_sizes(8) == [2, 3, 4, 5, 6, 7, 8]
        assert sequences["even"].admissible_sizes(9) == [2, 4, 6, 8]
        assert sequences["path"].admissible_sizes(6) == [2, 3, 4, 5, 6]


class TestOffspringDistribution:
    def test_all_ones_canonical_law(self, w_ones):
        xi = offspring_distribution(w_ones)
        assert xi.exact and xi.canonical
        assert xi.tau == Fraction(1, 2)
        assert xi.phi_tau == 2
        assert xi.criticality == "critical"
        assert [xi.pi(k) for k in range(4)] == [
            Fraction(1, 2),
            Fraction(1, 4),
            Fraction(1, 8),
            Fraction(1, 16),
        ]
        assert xi.sigma2 == 2

    def test_even_arity_law(self, w_even):
        xi = offspring_distribution(w_even)
        assert xi.tau == 1
        assert xi.pi(0) == Fraction(1, 2)
        assert xi.pi(1) == 0
        assert xi.pi(2) == Fraction(1, 2)
        assert xi.sigma2 == 1
        assert xi.span == 2

    def test_geometric_third_tilts_to_half(self):
        xi = offspring_distribution(WeightSequence.geometric(Fraction(1, 3)))
        assert xi.tau == Fraction(3, 2)
        assert xi.criticality == "critical"
        assert xi.mu == 1
        assert [xi.pi(k) for k in range(3)] == [
            Fraction(1, 2),
            Fraction(1, 4),
            Fraction(1, 8),
        ]
        assert xi.sigma2 == 2

    def test_poisson_is_critical_unit_poisson(self):
        xi = offspring_distribution(WeightSequence.poisson(Fraction(2)))
        assert xi.tau == Fraction(1, 2)
        assert xi.criticality == "critical"
        assert xi.sigma2 == 1
        # pi_k = e^{-1}/k!
        assert abs(float(xi.pi(0)) - math.exp(-1)) < 1e-12
        assert abs(float(xi.pi(3)) - math.exp(-1) / 6) < 1e-12

    def test_power_three_is_subcritical_with_zeta_mean(self, w_pow3):
        xi = offspring_distribution(w_pow3)
        assert xi.criticality == "subcritical"
        nu = float(mpmath.zeta(2) / mpmath.zeta(3) - 1)
        assert abs(float(xi.mu) - nu) < 1e-12
        assert xi.sigma2 == math.inf

    def test_power_four_variance_closed_form(self):
        xi = offspring_distribution(WeightSequence.power(4))
        z2, z3, z4 = (float(mpmath.zeta(s)) for s in (2, 3, 4))
        assert abs(xi.sigma2 - (z2 * z4 - z3 * z3) / (z4 * z4)) < 1e-12

    def test_power_two_is_critical(self):
        xi = offspring_distribution(WeightSequence.power(2))
        assert xi.criticality == "critical"
        assert 0 < float(xi.tau) < 1
        # mean one at the tilt point, via the distribution itself
        arr = xi.pi_array(20000)
        mean = sum(k * p for k, p in enumerate(arr))
        assert abs(mean - 1.0) < 1e-3  # truncation tail of the k^{-2} summand

    def test_degenerate_path_raises_then_fallback(self, w_path):
        with pytest.raises(WeightError):
            offspring_distribution(w_path)
        xi = sampling_offspring(w_path)
        assert not xi.canonical
        assert xi.pi(0) == Fraction(1, 2)
        assert xi.pi(1) == Fraction(1, 2)
        assert xi.mu == Fraction(1, 2)
        assert xi.sigma2 == Fraction(1, 4)

    def test_truncated_power_is_critical(self, sequences):
        xi = offspring_distribution(sequences["pow3t"])
        assert xi.criticality == "critical"
        assert xi.mu == 1

    @given(
        tail=st.lists(rationals, min_size=1, max_size=4).filter(
            lambda b: any(x > 0 for x in b[1:]) or len(b) > 1
        )
    )
    def test_finite_support_tilt_point_has_mean_one(self, tail):
        weights = [Fraction(1)] + list(tail)
        if not any(x > 0 for x in weights[2:]):
            return
        w = WeightSequence.explicit(weights)
        xi = offspring_distribution(w)
        top = w.support_max()
        if xi.exact:
            mean = sum(Fraction(k) * xi.pi(k) for k in range(top + 1))
            assert mean == 1
        else:
            mean = sum(k * float(xi.pi(k)) for k in range(top + 1))
            assert abs(mean - 1) < 1e-9

    @given(
        tail=st.lists(rationals, min_size=2, max_size=4).filter(
            lambda b: any(x > 0 for x in b[1:])
        )
    )
    def test_sigma2_matches_direct_moments(self, tail):
        w = WeightSequence.explicit([Fraction(1)] + list(tail))
        xi = offspring_distribution(w)
        if not xi.exact:
            return
        top = w.support_max()
        m2 = sum(Fraction(k * k) * xi.pi(k) for k in range(top + 1))
        assert xi.sigma2 == m2 - 1

    def test_pi_array_matches_pi(self, sequences):
        for w in sequences.values():
            xi = sampling_offspring(w)
            arr = xi.pi_array(12)
            for k in range(13):
                assert abs(arr[k] - float(xi.pi(k))) < 1e-12


class TestJson:
    def test_roundtrip_all_families(self, sequences):
        for w in sequences.values():
            assert weights_from_json(weights_to_json(w)) == w

    def test_roundtrip_with_tilt_and_truncation(self):
        w = WeightSequence.poisson(Fraction(3, 2), truncate=5).tilt(Fraction(2), Fraction(1, 3))
        assert weights_from_json(weights_to_json(w)) == w

    def test_rejects_floats(self):
        with pytest.raises(WeightError):
            weights_from_json(json.dumps({"family": "explicit", "weights": [1.5]}))

    def test_rejects_unknown_keys(self):
        with pytest.raises(WeightError):
            weights_from_json(
                json.dumps({"family": "explicit", "weights": ["1", "1"], "extra": 1})
            )

    @given(
        tail=st.lists(rationals, min_size=0, max_size=5),
        a=positive_rationals,
        b=positive_rationals,
    )
    def test_roundtrip_random_explicit(self, tail, a, b):
        w = WeightSequence.explicit([Fraction(1)] + list(tail)).tilt(a, b)
        assert weights_from_json(weights_to_json(w)) == w
