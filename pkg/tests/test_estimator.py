import math
import random

import pytest

from svrand.bitseq import BitSequence, count_substrings, count_substrings_fast, debruijn
from svrand.estimator import (EpsilonProfile, epsilon_h, epsilon_profile,
                              history_weights, loglog_history, max_history,
                              weighted_epsilon)
from svrand.synth import biased_coin


def occurrences(text, pattern):
    return sum(1 for i in range(len(text) - len(pattern) + 1)
               if text[i:i + len(pattern)] == pattern)


def reference_epsilon(text, h):
    """Brute-force deviation estimate by enumerating all histories."""
    n = len(text)
    if h == 0:
        if n == 0:
            return None
        return max(abs(occurrences(text, b) / n - 0.5) for b in "01")
    best = None
    for value in range(1 << h):
        history = format(value, f"0{h}b")
        den = occurrences(text, history)
        if den == 0:
            continue
        for b in "01":
            dev = abs(occurrences(text, history + b) / den - 0.5)
            if best is None or dev > best:
                best = dev
    return best


class TestEpsilonH:
    def test_constant_sequence_h0(self):
        counts = count_substrings_fast(BitSequence("0000"), 1)
        assert epsilon_h(counts, 0) == 0.5

    def test_absent_pattern_gives_half(self):
        # "10" never occurs although history "1" does
        counts = count_substrings_fast(BitSequence("0011"), 2)
        assert epsilon_h(counts, 1) == 0.5

    @pytest.mark.parametrize("order", [2, 3, 4, 6])
    def test_debruijn_cyclic_is_zero(self, order):
        counts = count_substrings(debruijn(order), order, "cyclic")
        for h in range(order):
            assert epsilon_h(counts, h) == 0.0

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_enumeration_oracle(self, seed):
        rng = random.Random(seed)
        text = "".join(rng.choice("01") for _ in range(rng.randrange(2, 300)))
        counts = count_substrings_fast(BitSequence(text), 6)
        for h in range(6):
            expected = reference_epsilon(text, h)
            got = epsilon_h(counts, h)
            if expected is None:
                assert got is None
            else:
                assert got == pytest.approx(expected, abs=1e-12)

    def test_undefined_when_no_history_occurs(self):
        counts = count_substrings_fast(BitSequence("01"), 4)
        assert epsilon_h(counts, 3) is None

    def test_exact_mode_excludes_tail_history(self):
        # "00110" ends with "0": that occurrence has no successor bit.
        counts = count_substrings_fast(BitSequence("00110"), 2)
        assert epsilon_h(counts, 1) == pytest.approx(1 / 6)
        assert epsilon_h(counts, 1, exact=True) == 0.0

    def test_requires_deep_enough_table(self):
        counts = count_substrings_fast(BitSequence("0101"), 2)
        with pytest.raises(ValueError):
            epsilon_h(counts, 2)
        with pytest.raises(ValueError):
            epsilon_h(counts, -1)


class TestMaxHistory:
    @pytest.mark.parametrize("n,expected", [
        (2, 0), (8, 2), (1000, 8), (1_191_328, 19),
    ])
    def test_values(self, n, expected):
        assert max_history(n) == expected

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            max_history(1)

    def test_matches_float_log(self):
        for n in (2, 3, 7, 64, 100, 4095, 4096, 10 ** 6):
            assert max_history(n) == math.floor(math.log2(n)) - 1

    def test_loglog_preset(self):
        assert loglog_history(10 ** 6) == 4
        assert loglog_history(2) == 0


class TestEpsilonProfile:
    def test_debruijn_cyclic_all_zero(self):
        profile = epsilon_profile(debruijn(4), mode="cyclic")
        assert profile.max_h == 3
        assert profile.epsilons == (0.0, 0.0, 0.0, 0.0)

    def test_constant_sequence(self):
        profile = epsilon_profile(BitSequence("0000"))
        assert profile.max_h == 1
        assert profile.epsilons == (0.5, 0.5)

    def test_oversized_request_is_clamped_with_warning(self):
        s = biased_coin(1000, 0.0, 3)
        with pytest.warns(UserWarning, match=r"clamped to 8"):
            profile = epsilon_profile(s, max_h=40)
        assert profile.max_h == 8
        assert profile.clamped and not profile.forced
        assert profile.requested_h == 40

    def test_forced_override_is_recorded(self):
        profile = epsilon_profile(BitSequence("0101"), max_h=3, force_h=True)
        assert profile.max_h == 3
        assert profile.forced

    def test_forced_profile_propagates_undefined(self):
        profile = epsilon_profile(BitSequence("0101"), max_h=5, force_h=True)
        assert profile.epsilons[4] == 0.5  # sole length-4 history, no successor seen
        assert profile.epsilons[5] is None  # no length-5 history occurs at all

    def test_smaller_request_allowed(self):
        profile = epsilon_profile(biased_coin(256, 0.0, 1), max_h=2)
        assert profile.max_h == 2 and not profile.clamped

    def test_rejects_tiny_input(self):
        with pytest.raises(ValueError):
            epsilon_profile(BitSequence("1"))

    def test_biased_coin_bias_recovered(self):
        profile = epsilon_profile(biased_coin(10 ** 6, 0.1, seed=42))
        assert 0.095 <= profile.epsilons[0] <= 0.105

    @pytest.mark.parametrize("seed", range(4))
    def test_entries_stay_in_range(self, seed):
        rng = random.Random(seed)
        s = BitSequence("".join(rng.choice("011") for _ in range(500)))
        for exact in (False, True):
            profile = epsilon_profile(s, exact=exact)
            assert all(e is not None and 0.0 <= e <= 0.5 for e in profile.epsilons)

    def test_profile_validates_range_and_bound(self):
        with pytest.raises(ValueError):
            EpsilonProfile(epsilons=(0.7,), max_h=0, n=4, mode="linear")
        with pytest.raises(ValueError):
            EpsilonProfile(epsilons=(0.1, 0.1, 0.1, 0.1), max_h=3, n=8, mode="linear")


class TestWeightedEpsilon:
    def test_constant_profiles(self):
        half = EpsilonProfile(epsilons=(0.5,) * 3, max_h=2, n=8, mode="linear")
        zero = EpsilonProfile(epsilons=(0.0,) * 3, max_h=2, n=8, mode="linear")
        assert weighted_epsilon(half) == pytest.approx(0.5, abs=1e-15)
        assert weighted_epsilon(zero) == 0.0

    def test_worked_value(self):
        profile = EpsilonProfile(epsilons=(0.0, 0.25, 0.5), max_h=2, n=8, mode="linear")
        # w(2) = 11/6; (0/1 + 0.25/2 + 0.5/3) / (11/6) = 7/44
        assert weighted_epsilon(profile) == pytest.approx(7 / 44, abs=1e-12)

    @pytest.mark.parametrize("max_h", [0, 1, 5, 20, 64])
    def test_weights_sum_to_one(self, max_h):
        assert abs(history_weights(max_h).sum() - 1.0) <= 1e-12

    def test_rejects_undefined_entries(self):
        profile = EpsilonProfile(epsilons=(0.1, None), max_h=1, n=4, mode="linear")
        with pytest.raises(ValueError, match="undefined"):
            weighted_epsilon(profile)

    def test_rejects_custom_h_without_opt_in(self):
        profile = EpsilonProfile(epsilons=(0.1,), max_h=0, n=8, mode="linear")
        with pytest.raises(ValueError, match="allow_custom_h"):
            weighted_epsilon(profile)
        assert weighted_epsilon(profile, allow_custom_h=True) == pytest.approx(0.1)
