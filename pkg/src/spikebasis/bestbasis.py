"""Bottom-up best-basis search over the wavelet packet tree for additive costs,
plus an exhaustive search used as its oracle."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import analytic
from .bases import DEFAULT_REL_TOL
from .costs import DEFAULT_ZERO_TOL, HistogramEstimator, discrete_entropy, histogram_entropies
from .dictionary import (
    MAX_ENUMERATION_N0,
    DictionaryTable,
    Node,
    TreeBasis,
    analyze,
    enumerate_covers,
)
from .processes import Dataset

MAX_EXACT_N0 = 20


@dataclass(frozen=True)
class CostSpec:
    """Which additive cost the search minimizes.

    ``kind`` is ``"lp"``, ``"l0"`` or ``"entropy"``.  For entropy,
    ``entropy_mode="discrete"`` treats the samples as an equally weighted
    discrete distribution (exact when the samples enumerate a process);
    ``"histogram"`` uses the plug-in histogram estimator.
    """

    kind: str = "lp"
    p: float = 1.0
    entropy_mode: str = "discrete"
    estimator: HistogramEstimator = field(default_factory=HistogramEstimator)
    rel_tol: float = DEFAULT_REL_TOL
    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if self.kind not in ("lp", "l0", "entropy"):
            raise ValueError(f"unknown cost kind {self.kind!r}")
        if self.kind == "lp" and not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")
        if self.entropy_mode not in ("discrete", "histogram"):
            raise ValueError(f"unknown entropy mode {self.entropy_mode!r}")

    @property
    def name(self) -> str:
        if self.kind == "lp":
            return f"lp(p={self.p:g})"
        if self.kind == "entropy":
            return f"entropy_{self.entropy_mode}"
        return self.kind


def node_cost(coefficients, cost: CostSpec) -> float:
    """Cost of one node given its coefficients, shape ``(size,)`` for one
    signal or ``(N, size)`` for a training set (samples in rows)."""
    y = np.atleast_2d(np.asarray(coefficients, dtype=float))
    N = y.shape[0]
    if cost.kind == "lp":
        return float(np.mean(np.sum(np.abs(y) ** cost.p, axis=1)))
    if cost.kind == "l0":
        return float(np.mean(np.sum(np.abs(y) > cost.zero_tol, axis=1)))
    if cost.entropy_mode == "discrete":
        weights = np.full(N, 1.0 / N)
        return float(sum(discrete_entropy(y[:, i], weights, cost.rel_tol) for i in range(y.shape[1])))
    entropies, _ = histogram_entropies(y, cost.estimator)
    return float(np.sum(entropies))


def _stack(tables) -> DictionaryTable:
    if isinstance(tables, DictionaryTable):
        return tables
    tables = list(tables)
    if not tables:
        raise ValueError("no tables given")
    first = tables[0]
    for t in tables:
        if (t.n0, t.K) != (first.n0, first.K):
            raise ValueError("tables have inconsistent shapes")
    levels = np.stack(
        [t.levels if t.batched else t.levels[:, None, :] for t in tables], axis=1
    )
    levels = levels.reshape(first.K + 1, -1, 2**first.n0)
    return DictionaryTable(levels, first.n0, first.K)


def node_costs(tables, cost: CostSpec, K: int | None = None) -> dict[Node, float]:
    table = _stack(tables)
    K = table.K if K is None else K
    if K > table.K:
        raise ValueError(f"requested depth {K} exceeds table depth {table.K}")
    return {(k, l): node_cost(table.node(k, l), cost) for k in range(K + 1) for l in range(2**k)}


@dataclass
class BestBasisResult:
    selection: TreeBasis
    total_cost: float
    per_node_costs: Mapping
    cost_kind: str
    n0: int
    K: int
    subtree_costs: Mapping = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "selection": sorted([list(node) for node in self.selection.nodes]),
                "total_cost": float(f"{self.total_cost:.12g}"),
                "cost_kind": self.cost_kind,
                "n0": self.n0,
                "K": self.K,
            }
        )


def prune(costs: Mapping, n0: int, K: int, cost_kind: str = "") -> BestBasisResult:
    """Keep a parent iff its cost is <= the summed best cost of its children."""
    best: dict[Node, float] = {}
    chosen: dict[Node, tuple[Node, ...]] = {}
    for l in range(2**K):
        best[(K, l)] = costs[(K, l)]
        chosen[(K, l)] = ((K, l),)
    for k in range(K - 1, -1, -1):
        for l in range(2**k):
            left, right = (k + 1, 2 * l), (k + 1, 2 * l + 1)
            children = best[left] + best[right]
            parent = costs[(k, l)]
            if parent <= children:
                best[(k, l)] = parent
                chosen[(k, l)] = ((k, l),)
            else:
                best[(k, l)] = children
                chosen[(k, l)] = chosen[left] + chosen[right]
            del chosen[left], chosen[right]
    return BestBasisResult(
        TreeBasis(frozenset(chosen[(0, 0)])), best[(0, 0)], costs, cost_kind, n0, K, best
    )


def best_basis(tables, cost: CostSpec, K: int | None = None) -> BestBasisResult:
    """Best basis for one signal, a batch table, or a sequence of tables."""
    table = _stack(tables)
    K = table.K if K is None else K
    return prune(node_costs(table, cost, K), table.n0, K, cost.name)


def best_basis_for_dataset(data: Dataset, cost: CostSpec, K: int | None = None) -> BestBasisResult:
    return best_basis(analyze(data.samples, K), cost, K)


def best_basis_per_realization(data: Dataset, cost: CostSpec, K: int | None = None) -> list[BestBasisResult]:
    table = analyze(data.samples, K)
    results = []
    for i in range(data.count):
        single = DictionaryTable(table.levels[:, i, :], table.n0, table.K)
        results.append(best_basis(single, cost, K))
    return results


def exhaustive_from_node_costs(costs: Mapping, n0: int, K: int, cost_kind: str = "", allow_large: bool = False) -> BestBasisResult:
    """Minimum over every enumerated tree basis; the first in enumeration
    order wins ties."""
    best_cover, best_value = None, np.inf
    for cover in enumerate_covers(n0, K, allow_large=allow_large):
        value = sum(costs[node] for node in cover)
        if value < best_value:
            best_cover, best_value = cover, value
    return BestBasisResult(TreeBasis(frozenset(best_cover)), float(best_value), costs, cost_kind, n0, K)


def exhaustive_best_basis(tables, cost: CostSpec, K: int | None = None) -> BestBasisResult:
    table = _stack(tables)
    if table.n0 > MAX_ENUMERATION_N0:
        raise ValueError(f"exhaustive search is limited to n0 <= {MAX_ENUMERATION_N0}")
    K = table.K if K is None else K
    return exhaustive_from_node_costs(node_costs(table, cost, K), table.n0, K, cost.name)


class SpikeNodeCosts(Mapping):
    """Closed-form expected node costs for the spike process; every node at a
    level shares the value of its sign class, so nothing is tabulated."""

    def __init__(self, n0: int, kind: str = "entropy", p: float = 1.0):
        self.n0, self.kind, self.p = n0, kind, p
        n = 2**n0
        self._pos, self._neg = [], []
        for k in range(n0 + 1):
            coords = n // 2**k
            if kind == "entropy":
                self._pos.append(coords * analytic.h_plus(k, n0))
                self._neg.append(coords * analytic.h_minus(k, n0))
            elif kind == "lp":
                # each node has one nonzero coefficient of size 2^{-k/2} in expectation
                value = 2.0 ** (-k * p / 2.0)
                self._pos.append(value)
                self._neg.append(value)
            elif kind == "l0":
                self._pos.append(1.0)
                self._neg.append(1.0)
            else:
                raise ValueError(f"unknown cost kind {kind!r}")

    def level_costs(self, k: int) -> tuple[float, float]:
        return self._pos[k], self._neg[k]

    def __getitem__(self, node):
        k, l = node
        if not 0 <= k <= self.n0 or not 0 <= l < 2**k:
            raise KeyError(node)
        return self._pos[k] if l == 0 else self._neg[k]

    def __iter__(self):
        for k in range(self.n0 + 1):
            for l in range(2**k):
                yield (k, l)

    def __len__(self):
        return 2 ** (self.n0 + 1) - 1


def best_basis_exact_spike(n0: int, cost_kind: str = "entropy", p: float = 1.0, K: int | None = None) -> BestBasisResult:
    """Best basis for the spike process from closed-form node costs.

    The pruning runs per (level, sign) class: all negative nodes of a level
    are interchangeable, so the recursion is O(n0).
    """
    if not 1 <= n0 <= MAX_EXACT_N0:
        raise ValueError(f"n0 must lie in [1, {MAX_EXACT_N0}]")
    K = n0 if K is None else K
    costs = SpikeNodeCosts(n0, cost_kind, p)
    pos_best = [0.0] * (K + 1)
    neg_best = [0.0] * (K + 1)
    pos_keep = [True] * (K + 1)
    neg_keep = [True] * (K + 1)
    pos_best[K], neg_best[K] = costs.level_costs(K)
    for k in range(K - 1, -1, -1):
        pos_cost, neg_cost = costs.level_costs(k)
        pos_children = pos_best[k + 1] + neg_best[k + 1]
        neg_children = 2.0 * neg_best[k + 1]
        pos_keep[k] = pos_cost <= pos_children
        neg_keep[k] = neg_cost <= neg_children
        pos_best[k] = pos_cost if pos_keep[k] else pos_children
        neg_best[k] = neg_cost if neg_keep[k] else neg_children

    nodes = []

    def expand(k, l):
        keep = pos_keep[k] if l == 0 else neg_keep[k]
        if k == K or keep:
            nodes.append((k, l))
        else:
            expand(k + 1, 2 * l)
            expand(k + 1, 2 * l + 1)

    expand(0, 0)
    subtree = _SignClassMapping(n0, pos_best, neg_best)
    name = f"lp(p={p:g})" if cost_kind == "lp" else cost_kind
    return BestBasisResult(TreeBasis(frozenset(nodes)), pos_best[0], costs, name, n0, K, subtree)


class _SignClassMapping(Mapping):
    def __init__(self, n0, pos, neg):
        self.n0, self.pos, self.neg = n0, pos, neg

    def __getitem__(self, node):
        k, l = node
        if not 0 <= k < len(self.pos) or not 0 <= l < 2**k:
            raise KeyError(node)
        return self.pos[k] if l == 0 else self.neg[k]

    def __iter__(self):
        for k in range(len(self.pos)):
            for l in range(2**k):
                yield (k, l)

    def __len__(self):
        return 2 ** len(self.pos) - 1


def selection_cost(result: BestBasisResult, selection: TreeBasis | Sequence[Node] | None = None) -> float:
    nodes = result.selection.nodes if selection is None else getattr(selection, "nodes", selection)
    return float(sum(result.per_node_costs[node] for node in nodes))
