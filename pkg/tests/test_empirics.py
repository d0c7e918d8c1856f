import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarnaklab import (
    Alphabet,
    SymbolSequence,
    ValidationError,
    Weighting,
    autocovariance,
    block_distribution,
    gen_iid,
    joint_block_distribution,
    total_variation,
)
from sarnaklab.empirics import decode_block, encode_blocks

import oracles

WEIGHTINGS = ["cesaro", "logarithmic"]
small_windows = st.lists(st.sampled_from([0, 1, 2]), min_size=4, max_size=200)


def ternary(values, origin=0):
    return SymbolSequence(Alphabet((0, 1, 2)), np.array(values, dtype=np.uint8), origin)


def pm1(values):
    return SymbolSequence.from_labels(values, Alphabet.pm1())


class TestBlockDistribution:
    @pytest.mark.parametrize("m", [1, 3, 8])
    def test_constant_is_point_mass(self, m):
        d = block_distribution(pm1([-1] * 30), m)
        assert d.mass == {d.encode([1] * m): 1.0}

    def test_alternating_pairs(self):
        n = 1000
        d = block_distribution(pm1([1, -1] * (n // 2)), 2)
        assert d.to_dict()["mass"] == {"+-": 500 / 999, "-+": 499 / 999}
        assert abs(d[[0, 1]] - 0.5) <= 1 / (n - 1)

    def test_liouville_single_symbol(self, liouville_1e6):
        d = block_distribution(liouville_1e6, 1)
        assert abs(d[[0]] - 0.5) < 0.005

    def test_block_longer_than_window(self):
        with pytest.raises(ValidationError):
            block_distribution(pm1([1, -1]), 3)

    def test_block_too_long_for_word(self):
        u = SymbolSequence(Alphabet(tuple(range(16))), np.zeros(100, dtype=np.uint8))
        block_distribution(u, 14)
        with pytest.raises(ValidationError, match="block too long"):
            block_distribution(u, 15)

    @settings(max_examples=60)
    @given(small_windows, st.integers(1, 4), st.sampled_from(WEIGHTINGS), st.integers(0, 50))
    def test_matches_naive_rescan(self, values, m, weighting, origin):
        if m > len(values):
            return
        d = block_distribution(ternary(values, origin), m, weighting)
        naive = oracles.naive_block_mass(values, m, weighting == "logarithmic", origin)
        got = {d.block_codes(c): p for c, p in d.mass.items()}
        assert got.keys() == naive.keys()
        if weighting == "cesaro":
            counts = oracles.block_counts(values, m)
            assert got == {k: c / (len(values) - m + 1) for k, c in counts.items()}
        else:
            assert got == pytest.approx(naive, abs=1e-12)

    @settings(max_examples=40)
    @given(small_windows, st.integers(1, 5), st.sampled_from(WEIGHTINGS))
    def test_is_probability(self, values, m, weighting):
        if m > len(values):
            return
        d = block_distribution(ternary(values), m, weighting)
        assert abs(d.probs.sum() - 1) < 1e-9
        assert np.all((d.probs >= 0) & (d.probs <= 1))

    def test_weightings_agree_on_single_position(self):
        u = ternary([2, 0, 1])
        assert block_distribution(u, 3, "cesaro").mass == block_distribution(u, 3, "logarithmic").mass

    def test_weightings_agree_on_constant(self):
        u = ternary([1] * 40)
        assert block_distribution(u, 4, "cesaro").mass == block_distribution(u, 4, "logarithmic").mass

    def test_json_shape(self):
        d = block_distribution(pm1([1, 1, -1, 1]), 2)
        data = json.loads(d.to_json())
        assert data["m"] == 2 and data["n"] == 4 and data["weighting"] == "cesaro"
        assert set(data["mass"]) == {"++", "+-", "-+"}


def test_encode_decode_roundtrip():
    codes = np.array([2, 0, 1, 1, 2], dtype=np.uint8)
    enc = encode_blocks(codes, 3, 3, 3)
    assert [decode_block(int(c), 3, 3) for c in enc] == [(2, 0, 1), (0, 1, 1), (1, 1, 2)]


class TestJointDistribution:
    def test_too_short(self):
        with pytest.raises(ValidationError):
            joint_block_distribution(pm1([1, -1, 1]), 2, 2)

    def test_alternating(self):
        j = joint_block_distribution(pm1([1, -1] * 50), 1, 1)
        plus, minus = 0, 1
        mass = j.mass
        assert set(mass) == {(plus, minus), (minus, plus)}
        assert mass[(plus, minus)] == pytest.approx(0.5, abs=1 / 99)

    def test_iid_near_independent(self, iid_1e6):
        j = joint_block_distribution(iid_1e6, 3, 3)
        mat, _ = j.matrix()
        prod = np.outer(mat.sum(1), mat.sum(0))
        assert total_variation(mat.ravel(), prod.ravel()) < 0.01

    @settings(max_examples=50)
    @given(small_windows, st.integers(0, 3), st.integers(1, 3), st.sampled_from(WEIGHTINGS))
    def test_origin_marginal_matches_block_distribution(self, values, g, m, weighting):
        if g + m > len(values):
            return
        u = ternary(values)
        j = joint_block_distribution(u, g, m, weighting)
        count = len(values) - g - m + 1
        ref = block_distribution(u[:count], 1, weighting)
        expected = np.zeros(3)
        expected[ref.codes] = ref.probs
        assert np.array_equal(j.origin_marginal, expected)

    @settings(max_examples=30)
    @given(small_windows, st.integers(0, 3), st.integers(1, 3))
    def test_cached_marginals(self, values, g, m):
        if g + m > len(values):
            return
        j = joint_block_distribution(ternary(values), g, m)
        mat, blocks = j.matrix()
        assert np.allclose(j.origin_marginal, mat.sum(1), atol=1e-12)
        bcodes, bmass = j.block_marginal
        assert np.array_equal(bcodes, blocks)
        assert np.allclose(bmass, mat.sum(0), atol=1e-12)
        assert abs(j.probs.sum() - 1) < 1e-9

    def test_matches_naive(self):
        values = [0, 1, 1, 2, 0, 2, 2, 1, 0, 0, 1]
        j = joint_block_distribution(ternary(values), 2, 2)
        n_pos = len(values) - 4 + 1
        naive = {}
        for i in range(n_pos):
            key = (values[i], tuple(values[i + 2:i + 4]))
            naive[key] = naive.get(key, 0) + 1 / n_pos
        got = {(a, decode_block(q, 3, 2)): p for (a, q), p in j.mass.items()}
        assert got == pytest.approx(naive, abs=1e-15)


class TestAutocovariance:
    @settings(max_examples=30)
    @given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=80), st.sampled_from(WEIGHTINGS))
    def test_lag_zero_is_one(self, values, weighting):
        assert autocovariance(pm1(values), 0, weighting) == pytest.approx(1.0, abs=1e-15)

    def test_alternating_lag_one(self):
        assert autocovariance(pm1([1, -1] * 100), 1) == -1.0

    def test_liouville_lag_one(self, liouville_1e6):
        assert abs(autocovariance(liouville_1e6, 1)) < 0.01

    def test_complex_labels_conjugate_origin(self):
        u = SymbolSequence(Alphabet((1, 1j)), np.array([0, 1, 1, 0], dtype=np.uint8))
        # pairs: (1, i), (i, i), (i, 1) -> i*1 + i*conj(i) + 1*conj(i) = i + 1 - i
        assert autocovariance(u, 1) == pytest.approx(1 / 3)
        assert autocovariance(u, 0) == pytest.approx(1.0)

    def test_lag_too_large(self):
        with pytest.raises(ValidationError):
            autocovariance(pm1([1, -1]), 2)

    def test_log_weighting_uses_one_over_i(self):
        u = pm1([1, -1, -1])
        # products at lag 1: -1 (weight 1), +1 (weight 1/2)
        assert autocovariance(u, 1, "logarithmic") == pytest.approx((-1 + 0.5) / 1.5)


def test_weighting_aliases():
    assert Weighting.coerce("log") == Weighting("logarithmic")
    with pytest.raises(ValidationError):
        Weighting("harmonic")
