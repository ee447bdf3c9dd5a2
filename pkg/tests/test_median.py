"""Median-set core: exact values, definition oracle, L1 cross-check."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from conftest import random_weights
from median_consensus import (
    closest_weighted_median,
    l1_best_responses,
    to_fraction,
    validate_weights,
    weighted_median_set,
)


def oracle_median_set(values, weights):
    """Direct transcription of the definition: x* qualifies iff the total
    weight strictly below and strictly above are each at most 1/2."""
    half = F(1, 2)
    out = []
    for x in sorted(set(values)):
        below = sum((w for v, w in zip(values, weights) if v < x), F(0))
        above = sum((w for v, w in zip(values, weights) if v > x), F(0))
        if below <= half and above <= half:
            out.append(x)
    return tuple(out)


class TestKnownValues:
    VALUES = (1, 2, 3)
    WEIGHTS = (F(1, 5), F(3, 10), F(1, 2))

    def test_median_set(self):
        assert weighted_median_set(self.VALUES, self.WEIGHTS) == (2, 3)

    def test_l1_objectives(self):
        # sum of w_j * |z - x_j| evaluated at each candidate z
        def cost(z):
            return sum((w * abs(z - v) for v, w in zip(self.VALUES, self.WEIGHTS)), F(0))

        assert cost(1) == F(13, 10)
        assert cost(2) == F(7, 10)
        assert cost(3) == F(7, 10)

    def test_best_responses_match_median_set(self):
        assert l1_best_responses(self.VALUES, self.WEIGHTS) == (2, 3)

    def test_closest_clamps_from_below(self):
        assert closest_weighted_median(self.VALUES, self.WEIGHTS, 1) == 2

    def test_closest_identity_inside(self):
        assert closest_weighted_median(self.VALUES, self.WEIGHTS, 2) == 2
        assert closest_weighted_median(self.VALUES, self.WEIGHTS, 3) == 3

    def test_majority_weight_pins_median(self):
        # one agent holding weight > 1/2 is the unique median
        assert weighted_median_set((5, 9), (F(2, 3), F(1, 3))) == (5,)

    def test_half_half_spans_both(self):
        assert weighted_median_set((0, 1), (F(1, 2), F(1, 2))) == (0, 1)


class TestZeroWeightValues:
    def test_zero_weight_value_inside_interval_is_median(self):
        values = (0, 1, 2)
        weights = (F(1, 2), F(0), F(1, 2))
        assert weighted_median_set(values, weights) == (0, 1, 2)

    def test_zero_weight_reference_kept_when_median(self):
        values = (0, 1, 2)
        weights = (F(1, 2), F(0), F(1, 2))
        assert closest_weighted_median(values, weights, 1) == 1

    def test_zero_weight_value_outside_interval_excluded(self):
        values = (0, 1, 5)
        weights = (F(0), F(1), F(0))
        assert weighted_median_set(values, weights) == (1,)
        assert closest_weighted_median(values, weights, 5) == 1


class TestValidation:
    def test_float_weight_rejected(self):
        with pytest.raises(TypeError, match="exact"):
            weighted_median_set((1, 2), (0.5, F(1, 2)))

    def test_bool_rejected(self):
        with pytest.raises(TypeError):
            to_fraction(True)

    def test_string_weight_parsed(self):
        assert to_fraction("3/10") == F(3, 10)
        assert to_fraction("0.25") == F(1, 4)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum"):
            validate_weights((F(1, 2), F(1, 3)))

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            validate_weights((F(3, 2), F(-1, 2)))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            weighted_median_set((1, 2, 3), (F(1, 2), F(1, 2)))

    def test_empty_profile(self):
        with pytest.raises(ValueError):
            weighted_median_set((), ())

    def test_incomparable_values(self):
        with pytest.raises(TypeError, match="comparable"):
            weighted_median_set((1, "a"), (F(1, 2), F(1, 2)))

    def test_reference_must_occur(self):
        with pytest.raises(ValueError):
            closest_weighted_median((1, 2), (F(1, 2), F(1, 2)), 7)

    def test_best_responses_need_numeric_values(self):
        with pytest.raises(TypeError):
            l1_best_responses(("a", "b"), (F(1, 2), F(1, 2)))


class TestRandomizedAgreement:
    """The scan implementation, the definition oracle, and the L1 argmin must
    agree on every profile; the spread of cases includes ties and zeros."""

    CASES = 400

    def test_scan_matches_definition_oracle(self):
        rnd = random.Random(0xA11CE)
        for _ in range(self.CASES):
            n = rnd.randint(1, 9)
            values = tuple(rnd.randint(-3, 3) for _ in range(n))
            weights = tuple(random_weights(rnd, n, max_den=40))
            assert weighted_median_set(values, weights) == oracle_median_set(values, weights)

    def test_scan_matches_l1_argmin(self):
        rnd = random.Random(0xB0B)
        for _ in range(self.CASES):
            n = rnd.randint(1, 8)
            values = tuple(F(rnd.randint(-6, 6), rnd.randint(1, 4)) for _ in range(n))
            weights = tuple(random_weights(rnd, n, max_den=30))
            assert weighted_median_set(values, weights) == l1_best_responses(values, weights)

    def test_median_set_is_contiguous_run_of_sorted_values(self):
        rnd = random.Random(7)
        for _ in range(self.CASES):
            n = rnd.randint(2, 9)
            values = tuple(rnd.randint(0, 4) for _ in range(n))
            weights = tuple(random_weights(rnd, n, max_den=24))
            med = weighted_median_set(values, weights)
            distinct = sorted(set(values))
            lo = distinct.index(med[0])
            assert list(med) == distinct[lo:lo + len(med)]

    def test_closest_is_nearest_in_order(self):
        rnd = random.Random(99)
        for _ in range(self.CASES):
            n = rnd.randint(1, 8)
            values = tuple(rnd.randint(0, 5) for _ in range(n))
            weights = tuple(random_weights(rnd, n, max_den=24))
            med = weighted_median_set(values, weights)
            ref = values[rnd.randrange(n)]
            got = closest_weighted_median(values, weights, ref)
            if ref < med[0]:
                assert got == med[0]
            elif ref > med[-1]:
                assert got == med[-1]
            else:
                assert got == ref
