import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikebasis.analytic import h_minus, h_plus, standard_basis_cost
from spikebasis.bestbasis import (
    MAX_EXACT_N0,
    CostSpec,
    SpikeNodeCosts,
    best_basis,
    best_basis_exact_spike,
    best_basis_for_dataset,
    best_basis_per_realization,
    exhaustive_best_basis,
    exhaustive_from_node_costs,
    node_costs,
    prune,
    selection_cost,
)
from spikebasis.dictionary import TreeBasis, analyze, count_tree_bases
from spikebasis.processes import make_rng, spike_dataset

ENTROPY = CostSpec("entropy")
C1 = CostSpec("lp", p=1.0)


def spike_table(n0):
    return analyze(spike_dataset(2**n0).samples)


class TestCostSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            CostSpec("l2")
        with pytest.raises(ValueError):
            CostSpec("lp", p=0.0)
        with pytest.raises(ValueError):
            CostSpec("entropy", entropy_mode="kde")

    def test_names(self):
        assert CostSpec("lp", p=0.5).name == "lp(p=0.5)"
        assert CostSpec("entropy").name == "entropy_discrete"
        assert CostSpec("l0").name == "l0"


class TestSpikeSelections:
    def test_n8_entropy_selects_root(self):
        result = best_basis(spike_table(3), ENTROPY)
        assert result.selection == TreeBasis.root()
        assert result.total_cost == pytest.approx(standard_basis_cost(8), abs=1e-12)

    def test_n4_entropy_selects_walsh(self):
        result = best_basis(spike_table(2), ENTROPY)
        assert result.selection == TreeBasis.level(2)
        assert result.total_cost == pytest.approx(3.0, abs=1e-12)

    def test_single_spike_c1_selects_root(self):
        table = analyze(np.eye(8)[0])
        fast = best_basis(table, C1)
        slow = exhaustive_best_basis(table, C1)
        assert fast.selection == slow.selection == TreeBasis.root()
        assert fast.total_cost == slow.total_cost == 1.0

    def test_exact_examples(self):
        r3 = best_basis_exact_spike(3)
        assert r3.selection == TreeBasis.root()
        assert r3.total_cost == pytest.approx(4.34, abs=0.01)
        r2 = best_basis_exact_spike(2)
        assert r2.selection == TreeBasis.level(2)
        assert r2.total_cost == pytest.approx(3.0, abs=1e-12)
        r1 = best_basis_exact_spike(1)
        assert r1.selection == TreeBasis.level(1)
        assert r1.total_cost == pytest.approx(1.0, abs=1e-12)
        assert r1.per_node_costs[(0, 0)] == pytest.approx(2.0, abs=1e-12)

    def test_exact_range(self):
        with pytest.raises(ValueError):
            best_basis_exact_spike(0)
        with pytest.raises(ValueError):
            best_basis_exact_spike(MAX_EXACT_N0 + 1)
        with pytest.raises(ValueError):
            best_basis_exact_spike(3, "l2")

    @pytest.mark.parametrize("n0", range(3, MAX_EXACT_N0 + 1))
    def test_exact_root_for_large_n(self, n0):
        result = best_basis_exact_spike(n0)
        assert result.selection == TreeBasis.root()
        assert result.total_cost == pytest.approx(standard_basis_cost(2**n0), rel=1e-12)

    @pytest.mark.parametrize("n0", range(1, 7))
    @pytest.mark.parametrize("kind", ["entropy", "lp", "l0"])
    def test_closed_form_node_costs_match_tabulated(self, n0, kind):
        spec = CostSpec(kind) if kind != "lp" else CostSpec("lp", p=0.7)
        tabulated = node_costs(spike_table(n0), spec)
        closed = SpikeNodeCosts(n0, kind, 0.7)
        assert len(closed) == len(tabulated)
        for node, value in tabulated.items():
            assert closed[node] == pytest.approx(value, abs=1e-12)

    @pytest.mark.parametrize("n0", range(1, 7))
    @pytest.mark.parametrize("kind,p", [("entropy", 1.0), ("lp", 1.0), ("lp", 0.5)])
    def test_closed_form_search_matches_tabulated_search(self, n0, kind, p):
        spec = CostSpec(kind, p=p)
        tabulated = best_basis(spike_table(n0), spec)
        exact = best_basis_exact_spike(n0, kind, p)
        assert exact.selection == tabulated.selection
        assert exact.total_cost == pytest.approx(tabulated.total_cost, abs=1e-10)

    @pytest.mark.parametrize("n0", range(1, 5))
    def test_closed_form_search_matches_exhaustive(self, n0):
        exact = best_basis_exact_spike(n0)
        slow = exhaustive_from_node_costs(SpikeNodeCosts(n0), n0, n0)
        assert exact.selection == slow.selection
        assert exact.total_cost == pytest.approx(slow.total_cost, abs=1e-10)

    def test_partial_depth(self):
        result = best_basis_exact_spike(2, K=1)
        assert result.K == 1
        # level 1 costs 2 f(1/2) + 2 g(1/2) = 5 bits, more than the root
        assert result.selection == TreeBasis.root()
        assert result.subtree_costs[(1, 0)] + result.subtree_costs[(1, 1)] == pytest.approx(5.0, abs=1e-12)
        result.selection.validate(2, 1)

    def test_c1_over_dictionary_is_root_everywhere(self):
        for n0 in range(1, MAX_EXACT_N0 + 1):
            result = best_basis_exact_spike(n0, "lp", 0.5)
            assert result.selection == TreeBasis.root()
            assert result.total_cost == 1.0


class TestOracleEquivalence:
    @pytest.mark.parametrize("n0", [1, 2, 3, 4])
    def test_random_vectors_c1(self, n0):
        rng = make_rng(n0)
        for _ in range(50):
            table = analyze(rng.standard_normal(2**n0))
            fast, slow = best_basis(table, C1), exhaustive_best_basis(table, C1)
            assert fast.total_cost == pytest.approx(slow.total_cost, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(1, 4),
        st.sampled_from([CostSpec("lp", p=0.3), CostSpec("l0", zero_tol=0.5), CostSpec("entropy")]),
        st.integers(0, 2**32 - 1),
        st.integers(1, 6),
    )
    def test_random_training_sets(self, n0, spec, seed, count):
        # integer-valued data makes ties and repeated values common
        samples = make_rng(seed).integers(-2, 3, size=(count, 2**n0)).astype(float)
        table = analyze(samples)
        fast, slow = best_basis(table, spec), exhaustive_best_basis(table, spec)
        assert fast.total_cost == pytest.approx(slow.total_cost, abs=1e-10)

    def test_exhaustive_counts_bases(self):
        calls = []

        class Counting(dict):
            def __getitem__(self, node):
                calls.append(node)
                return super().__getitem__(node)

        costs = Counting(node_costs(spike_table(2), ENTROPY))
        exhaustive_from_node_costs(costs, 2, 2)
        # five covers with 1 + 2 + 3 + 3 + 4 nodes
        assert len(calls) == 13
        assert count_tree_bases(2) == 5

    def test_exhaustive_guard(self):
        with pytest.raises(ValueError):
            exhaustive_best_basis(analyze(np.ones(64)), C1)


class TestResultInvariants:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from([0.5, 1.0]))
    def test_total_is_sum_and_beats_extremes(self, n0, seed, p):
        table = analyze(make_rng(seed).standard_normal((3, 2**n0)))
        result = best_basis(table, CostSpec("lp", p=p))
        result.selection.validate(n0)
        assert selection_cost(result) == pytest.approx(result.total_cost, abs=1e-10)
        assert result.total_cost <= selection_cost(result, TreeBasis.root()) + 1e-12
        assert result.total_cost <= selection_cost(result, TreeBasis.level(n0)) + 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_kept_value_is_min_of_parent_and_children(self, n0, seed):
        table = analyze(make_rng(seed).standard_normal(2**n0))
        result = best_basis(table, C1)
        sub, costs = result.subtree_costs, result.per_node_costs
        for k in range(n0):
            for l in range(2**k):
                children = sub[(k + 1, 2 * l)] + sub[(k + 1, 2 * l + 1)]
                assert sub[(k, l)] == pytest.approx(min(costs[(k, l)], children), abs=1e-12)

    def test_ties_keep_parent(self):
        costs = {(0, 0): 2.0, (1, 0): 1.0, (1, 1): 1.0}
        assert prune(costs, 1, 1).selection == TreeBasis.root()
        costs[(0, 0)] = 2.0 + 1e-12
        assert prune(costs, 1, 1).selection == TreeBasis.level(1)

    def test_json(self):
        obj = json.loads(best_basis_exact_spike(2).to_json())
        assert obj == {"selection": [[2, 0], [2, 1], [2, 2], [2, 3]], "total_cost": 3.0, "cost_kind": "entropy", "n0": 2, "K": 2}


class TestInputs:
    def test_sequence_of_tables_equals_batch(self, rng):
        x = rng.standard_normal((4, 8))
        single = [analyze(row) for row in x]
        a = best_basis(single, CostSpec("lp", p=0.5))
        b = best_basis(analyze(x), CostSpec("lp", p=0.5))
        assert a.selection == b.selection
        assert a.total_cost == pytest.approx(b.total_cost, abs=1e-12)

    def test_inconsistent_tables(self, rng):
        with pytest.raises(ValueError):
            best_basis([analyze(rng.standard_normal(8)), analyze(rng.standard_normal(4))], C1)
        with pytest.raises(ValueError):
            best_basis([], C1)

    def test_depth_beyond_table(self):
        with pytest.raises(ValueError):
            node_costs(analyze(np.ones(8), K=1), C1, K=2)

    def test_per_realization(self):
        data = spike_dataset(8)
        results = best_basis_per_realization(data, C1)
        assert len(results) == 8
        assert all(r.selection == TreeBasis.root() and r.total_cost == 1.0 for r in results)
        average = best_basis_for_dataset(data, C1)
        assert average.total_cost == 1.0

    def test_histogram_entropy_mode_runs(self):
        samples = make_rng(0).uniform(-1, 1, size=(500, 8))
        result = best_basis(analyze(samples), CostSpec("entropy", entropy_mode="histogram"))
        result.selection.validate(3)
        assert math.isfinite(result.total_cost)


class TestParentChildEntropy:
    @pytest.mark.parametrize("n0", range(3, 21))
    def test_inequalities(self, n0):
        for k in range(1, n0 - 1):
            assert h_minus(k, n0) <= h_minus(k + 1, n0)
            assert h_plus(k, n0) <= (h_plus(k + 1, n0) + h_minus(k + 1, n0)) / 2
        assert h_minus(n0 - 1, n0) >= h_minus(n0, n0)
        assert h_minus(n0 - 3, n0) <= h_minus(n0, n0)
