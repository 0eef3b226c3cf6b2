import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikebasis.bases import equivalent, walsh_basis
from spikebasis.dictionary import (
    HAAR,
    DictionaryTable,
    FilterPair,
    TreeBasis,
    analyze,
    count_tree_bases,
    dyadic_exponent,
    enumerate_covers,
    enumerate_tree_bases,
    node_basis_matrix,
    node_sign,
    reconstruct,
)
from spikebasis.processes import make_rng

SIZES = [2, 4, 8, 16, 32]


def daubechies4():
    s3 = math.sqrt(3.0)
    return FilterPair.from_lowpass(np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * math.sqrt(2.0)))


class TestFilters:
    def test_haar_taps(self):
        assert np.allclose(HAAR.h, [1 / math.sqrt(2)] * 2, atol=0)
        assert np.allclose(HAAR.g, [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=0)

    @pytest.mark.parametrize(
        "n,filters",
        [(n, HAAR) for n in SIZES] + [(n, daubechies4()) for n in SIZES if n >= 4],
    )
    def test_mirror_identities(self, n, filters, rng):
        x = rng.standard_normal((100, n))
        y = rng.standard_normal((100, n // 2))
        pr = filters.lowpass_adjoint(filters.lowpass(x)) + filters.highpass_adjoint(filters.highpass(x))
        assert np.max(np.abs(pr - x)) <= 1e-12
        assert np.max(np.abs(filters.lowpass(filters.highpass_adjoint(y)))) <= 1e-12
        assert np.max(np.abs(filters.highpass(filters.lowpass_adjoint(y)))) <= 1e-12

    @settings(max_examples=50)
    @given(st.sampled_from(SIZES), st.integers(0, 2**32 - 1))
    def test_energy_preserved_per_split(self, n, seed):
        x = make_rng(seed).standard_normal(n)
        energy = np.sum(HAAR.lowpass(x) ** 2) + np.sum(HAAR.highpass(x) ** 2)
        assert energy == pytest.approx(np.sum(x**2), rel=1e-12, abs=1e-12)

    def test_periodic_wrap(self):
        # with four taps the last output wraps onto the first samples
        d4 = daubechies4()
        x = np.zeros(4)
        x[0] = 1.0
        assert d4.lowpass(x)[1] == pytest.approx(d4.h[2], abs=1e-15)

    def test_rejects_odd_length(self):
        with pytest.raises(ValueError):
            HAAR.lowpass(np.ones(3))

    def test_rejects_mismatched_filters(self):
        with pytest.raises(ValueError):
            FilterPair([1.0, 1.0], [1.0])


class TestAnalyze:
    def test_two_point(self):
        t = analyze(np.array([3.0, 1.0]), 1)
        assert np.allclose(t.levels[1], [4 / math.sqrt(2), 2 / math.sqrt(2)], atol=1e-15)

    def test_root_holds_signal_and_levels_hold_n_values(self, rng):
        x = rng.standard_normal(16)
        t = analyze(x)
        assert np.array_equal(t.node(0, 0), x)
        assert t.levels.shape == (5, 16)
        assert t.levels.size == (t.K + 1) * t.n

    def test_spike_positive_node_values(self):
        n0 = 3
        t = analyze(np.eye(8)[0])
        for k in range(n0 + 1):
            node = np.asarray(t.node(k, 0))
            assert node[0] == pytest.approx(1 / math.sqrt(2**k), abs=1e-15)
            assert np.all(node[1:] == 0)

    def test_constant_vector_has_zero_negative_nodes(self):
        t = analyze(np.ones(16))
        for k in range(1, 5):
            for l in range(1, 2**k):
                assert np.max(np.abs(t.node(k, l))) <= 1e-15

    @pytest.mark.parametrize("n0", [2, 3, 4])
    def test_spike_coefficient_distributions(self, n0):
        n = 2**n0
        t = analyze(np.eye(n))
        for k in range(n0 + 1):
            amp = 1 / math.sqrt(2**k)
            for l in range(2**k):
                values = np.asarray(t.node(k, l)).ravel()
                # each column collects one coefficient over all n equally likely spikes
                for col in np.asarray(t.node(k, l)).T:
                    if l == 0:
                        assert np.sum(np.isclose(col, amp, atol=1e-14)) == 2**k
                        assert np.sum(np.abs(col) <= 1e-14) == n - 2**k
                    else:
                        assert np.sum(np.isclose(col, amp, atol=1e-14)) == 2 ** (k - 1)
                        assert np.sum(np.isclose(col, -amp, atol=1e-14)) == 2 ** (k - 1)
                assert values.size == n * 2 ** (n0 - k)

    def test_batched_matches_single(self, rng):
        x = rng.standard_normal((5, 8))
        batch = analyze(x)
        for i in range(5):
            assert np.allclose(batch.levels[:, i], analyze(x[i]).levels, atol=0)

    def test_errors(self):
        with pytest.raises(ValueError):
            analyze(np.ones(6))
        with pytest.raises(ValueError):
            analyze(np.ones(8), K=4)
        with pytest.raises(ValueError):
            analyze(np.ones(8), K=1).node(2, 0)
        with pytest.raises(ValueError):
            dyadic_exponent(0)

    def test_json_round_trip(self, rng):
        t = analyze(rng.standard_normal(8), 2)
        back = DictionaryTable.from_json(t.to_json())
        assert (back.n0, back.K) == (3, 2)
        assert np.allclose(back.levels, t.levels, atol=1e-11)
        with pytest.raises(ValueError):
            analyze(np.eye(4)).to_json()


class TestNodeBases:
    def test_root_is_identity(self):
        assert np.array_equal(node_basis_matrix(3, 0, 0), np.eye(8))

    def test_haar_pair(self):
        lo, hi = node_basis_matrix(1, 1, 0), node_basis_matrix(1, 1, 1)
        assert np.allclose(lo[:, 0], [1 / math.sqrt(2)] * 2, atol=1e-15)
        assert np.allclose(hi[:, 0], [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-15)

    def test_full_depth_n4_is_walsh(self):
        assert equivalent(TreeBasis.level(2).matrix(2), walsh_basis(4).matrix)

    @pytest.mark.parametrize("n0", [2, 3, 4])
    def test_inner_products_reproduce_coefficients(self, n0, rng):
        x = rng.standard_normal(2**n0)
        t = analyze(x)
        for k in range(n0 + 1):
            for l in range(2**k):
                W = node_basis_matrix(n0, k, l)
                assert np.allclose(W.T @ W, np.eye(W.shape[1]), atol=1e-12)
                assert np.allclose(x @ W, t.node(k, l), atol=1e-10)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            node_basis_matrix(2, 3, 0)
        with pytest.raises(ValueError):
            node_basis_matrix(2, 1, 2)


class TestNodeSigns:
    def test_examples(self):
        assert node_sign(3, 0) == "positive"
        assert node_sign(2, 1) == "negative"
        assert node_sign(0, 0) == "positive"

    @given(st.integers(0, 12).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, 2**k - 1))))
    def test_descendants_of_negative_nodes_are_negative(self, node):
        k, l = node
        left, right = node_sign(k + 1, 2 * l), node_sign(k + 1, 2 * l + 1)
        assert right == "negative"
        assert left == node_sign(k, l)

    def test_invalid(self):
        with pytest.raises(ValueError):
            node_sign(1, 2)


class TestEnumeration:
    def test_counts(self):
        assert [count_tree_bases(K) for K in range(6)] == [1, 2, 5, 26, 677, 458330]
        # the doubly exponential lower bound is tight at K=1 and strict after
        assert count_tree_bases(1) == 2 ** (2**0)
        assert all(count_tree_bases(K) > 2 ** (2 ** (K - 1)) for K in range(2, 9))

    @pytest.mark.parametrize("n0", [0, 1, 2, 3, 4])
    def test_every_cover_once(self, n0):
        bases = list(enumerate_tree_bases(n0))
        assert len(bases) == count_tree_bases(n0)
        assert len(set(bases)) == len(bases)
        assert bases[0] == TreeBasis.root()
        for b in bases:
            b.validate(n0)

    def test_partial_depth(self):
        assert len(list(enumerate_tree_bases(4, K=2))) == 5
        assert all(max(k for k, _ in b.nodes) <= 2 for b in enumerate_tree_bases(4, K=2))

    @pytest.mark.parametrize("n0", [1, 2, 3, 4])
    def test_every_basis_is_orthonormal(self, n0):
        n = 2**n0
        for b in enumerate_tree_bases(n0):
            m = b.matrix(n0)
            assert np.max(np.abs(m.T @ m - np.eye(n))) <= 1e-10

    def test_guard(self):
        with pytest.raises(ValueError):
            next(enumerate_tree_bases(6))
        with pytest.raises(ValueError):
            enumerate_covers(6)
        assert len(enumerate_covers(5)) == 458330

    def test_validate_rejects_overlap_and_gaps(self):
        with pytest.raises(ValueError):
            TreeBasis(frozenset({(0, 0), (1, 0)})).validate(2)
        with pytest.raises(ValueError):
            TreeBasis(frozenset({(1, 0)})).validate(2)
        with pytest.raises(ValueError):
            TreeBasis(frozenset({(2, 0), (2, 1), (1, 1)})).validate(2, K=1)

    def test_json(self):
        b = TreeBasis(frozenset({(1, 0), (2, 2), (2, 3)}))
        assert b.to_json() == "[[1, 0], [2, 2], [2, 3]]"
        assert TreeBasis.from_json(b.to_json()) == b


class TestReconstruction:
    def test_root_selection(self, rng):
        x = rng.standard_normal(8)
        assert np.array_equal(reconstruct(analyze(x), TreeBasis.root()), x)

    @pytest.mark.parametrize("n", SIZES)
    def test_full_depth(self, n, rng):
        x = rng.standard_normal(n)
        t = analyze(x)
        assert np.max(np.abs(reconstruct(t, TreeBasis.level(t.K)) - x)) <= 1e-10

    def test_mixed_depth_on_spike(self):
        x = np.eye(8)[2]
        sel = TreeBasis(frozenset({(1, 0), (2, 2), (3, 6), (3, 7)}))
        assert np.max(np.abs(reconstruct(analyze(x), sel) - x)) <= 1e-10

    @pytest.mark.parametrize("n0", [1, 2, 3, 4])
    def test_every_cover(self, n0, rng):
        x = rng.standard_normal(2**n0)
        t = analyze(x)
        for b in enumerate_tree_bases(n0):
            assert np.max(np.abs(reconstruct(t, b) - x)) <= 1e-10

    def test_invalid_cover(self):
        with pytest.raises(ValueError):
            reconstruct(analyze(np.ones(4)), TreeBasis(frozenset({(1, 0)})))
