"""Wavelet packet dictionary with periodic convolution-subsampling.

Node ``(k, l)`` lives at level ``k`` (``0 <= l < 2**k``) and holds
``2**(n0 - k)`` coefficients; its children are ``(k+1, 2l)`` (lowpass) and
``(k+1, 2l+1)`` (highpass).  Level ``k`` is stored as one contiguous array of
length ``n`` with node ``l`` at offset ``l * 2**(n0 - k)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

Node = tuple[int, int]

MAX_ENUMERATION_N0 = 5


@dataclass(frozen=True, eq=False)
class FilterPair:
    h: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if h.shape != g.shape or h.ndim != 1 or h.size < 2:
            raise ValueError("h and g must be 1D filters of the same length >= 2")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @classmethod
    def from_lowpass(cls, h) -> "FilterPair":
        """Highpass by the mirror rule ``g_l = (-1)^(l-1) h_(L-l+1)``."""
        h = np.asarray(h, dtype=float)
        signs = (-1.0) ** np.arange(h.size)
        return cls(h, signs * h[::-1])

    @classmethod
    def haar(cls) -> "FilterPair":
        return cls.from_lowpass([1 / np.sqrt(2.0), 1 / np.sqrt(2.0)])

    @property
    def length(self) -> int:
        return self.h.size

    def _taps(self, m: int) -> np.ndarray:
        half = m // 2
        return (2 * np.arange(half)[:, None] + np.arange(self.length)[None, :]) % m

    def _down(self, x, filt):
        x = np.asarray(x, dtype=float)
        m = x.shape[-1]
        if m < 2 or m % 2:
            raise ValueError("signal length must be even")
        return x[..., self._taps(m)] @ filt

    def _up(self, y, filt):
        y = np.asarray(y, dtype=float)
        m = 2 * y.shape[-1]
        out = np.zeros(y.shape[:-1] + (m,))
        idx = self._taps(m)
        for l in range(self.length):
            # for a fixed tap the target positions 2k + l are distinct mod m
            out[..., idx[:, l]] += filt[l] * y
        return out

    def lowpass(self, x):
        """``H``: periodic convolution with ``h`` followed by downsampling by 2."""
        return self._down(x, self.h)

    def highpass(self, x):
        """``G``."""
        return self._down(x, self.g)

    def lowpass_adjoint(self, y):
        """``H*``: upsampling followed by anticonvolution."""
        return self._up(y, self.h)

    def highpass_adjoint(self, y):
        """``G*``."""
        return self._up(y, self.g)


HAAR = FilterPair.haar()


def dyadic_exponent(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    return n.bit_length() - 1


def node_size(n0: int, k: int) -> int:
    return 2 ** (n0 - k)


def _check_node(n0: int, k: int, l: int, K: int | None = None):
    depth = n0 if K is None else K
    if not 0 <= k <= depth or not 0 <= l < 2**k:
        raise ValueError(f"node ({k}, {l}) is outside a tree of depth {depth}")


@dataclass(frozen=True, eq=False)
class DictionaryTable:
    """Coefficients of one signal (shape ``(K+1, n)``) or a batch of signals
    (shape ``(K+1, N, n)``) in the wavelet packet tree."""

    levels: np.ndarray
    n0: int
    K: int

    @property
    def n(self) -> int:
        return 2**self.n0

    @property
    def batched(self) -> bool:
        return self.levels.ndim == 3

    def node(self, k: int, l: int) -> np.ndarray:
        _check_node(self.n0, k, l, self.K)
        size = node_size(self.n0, k)
        return self.levels[k, ..., l * size : (l + 1) * size]

    def nodes(self) -> Iterator[Node]:
        for k in range(self.K + 1):
            for l in range(2**k):
                yield (k, l)

    def to_json(self) -> str:
        if self.batched:
            raise ValueError("only single-signal tables serialize")
        levels = [
            [[float(f"{v:.12g}") for v in self.node(k, l)] for l in range(2**k)]
            for k in range(self.K + 1)
        ]
        return json.dumps({"n0": self.n0, "K": self.K, "levels": levels})

    @classmethod
    def from_json(cls, text: str) -> "DictionaryTable":
        obj = json.loads(text)
        levels = np.array([np.concatenate(level) for level in obj["levels"]], dtype=float)
        return cls(levels, obj["n0"], obj["K"])


def analyze(x, K: int | None = None, filters: FilterPair = HAAR) -> DictionaryTable:
    """Expand ``x`` (length n = 2**n0, or a batch with samples in rows) into
    the packet tree down to depth ``K`` (default: full depth)."""
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2):
        raise ValueError("x must be a vector or a 2D batch of vectors")
    n0 = dyadic_exponent(x.shape[-1])
    K = n0 if K is None else K
    if not 0 <= K <= n0:
        raise ValueError(f"depth K={K} outside [0, {n0}]")
    levels = np.empty((K + 1,) + x.shape)
    levels[0] = x
    for k in range(K):
        size = node_size(n0, k)
        parents = levels[k].reshape(x.shape[:-1] + (2**k, size))
        children = np.concatenate(
            [filters.lowpass(parents), filters.highpass(parents)], axis=-1
        )
        levels[k + 1] = children.reshape(x.shape)
    return DictionaryTable(levels, n0, K)


def node_basis_matrix(n0: int, k: int, l: int, filters: FilterPair = HAAR) -> np.ndarray:
    """``n x 2**(n0-k)`` matrix whose columns ``w_{k,l,m}`` span node (k, l).

    Column m holds the coefficient m of node (k, l) for each standard basis
    input, so inner products with these columns reproduce :func:`analyze`.
    """
    _check_node(n0, k, l)
    table = analyze(np.eye(2**n0), k, filters)
    return np.array(table.node(k, l))


def node_sign(k: int, l: int) -> str:
    """``"positive"`` for the all-lowpass node ``(k, 0)``, else ``"negative"``."""
    if k < 0 or not 0 <= l < 2**k:
        raise ValueError(f"invalid node ({k}, {l})")
    return "positive" if l == 0 else "negative"


@dataclass(frozen=True)
class TreeBasis:
    """A set of nodes whose index ranges tile ``[0, n)`` exactly."""

    nodes: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset((int(k), int(l)) for k, l in self.nodes))

    def sorted_nodes(self) -> list[Node]:
        # by position of the covered index range; a tiling has no ties
        return sorted(self.nodes, key=lambda kl: kl[1] / 2 ** kl[0])

    def validate(self, n0: int, K: int | None = None) -> None:
        depth = n0 if K is None else K
        covered = np.zeros(2**n0, dtype=int)
        for k, l in self.nodes:
            _check_node(n0, k, l, depth)
            size = node_size(n0, k)
            # node (k, l) covers the fine-level leaf range of its dyadic interval
            covered[l * size : (l + 1) * size] += 1
        if not np.all(covered == 1):
            raise ValueError("selection is not a disjoint cover of the index space")

    def matrix(self, n0: int, filters: FilterPair = HAAR) -> np.ndarray:
        return np.hstack([node_basis_matrix(n0, k, l, filters) for k, l in self.sorted_nodes()])

    def to_json(self) -> str:
        return json.dumps(sorted([list(node) for node in self.nodes]))

    @classmethod
    def from_json(cls, text: str) -> "TreeBasis":
        return cls(frozenset(tuple(node) for node in json.loads(text)))

    @classmethod
    def root(cls) -> "TreeBasis":
        return cls(frozenset({(0, 0)}))

    @classmethod
    def level(cls, k: int) -> "TreeBasis":
        return cls(frozenset((k, l) for l in range(2**k)))


def count_tree_bases(K: int) -> int:
    """Number of tree bases of depth at most K: N(0) = 1, N(d) = N(d-1)^2 + 1."""
    count = 1
    for _ in range(K):
        count = count * count + 1
    return count


def _covers(k: int, l: int, K: int) -> list[tuple[Node, ...]]:
    if k == K:
        return [((k, l),)]
    left = _covers(k + 1, 2 * l, K)
    right = _covers(k + 1, 2 * l + 1, K)
    out = [((k, l),)]
    out.extend(a + b for a, b in itertools.product(left, right))
    return out


def enumerate_tree_bases(n0: int, K: int | None = None, allow_large: bool = False) -> Iterator[TreeBasis]:
    """Every admissible tree basis exactly once, root-first depth-first order."""
    K = n0 if K is None else K
    if not 0 <= K <= n0:
        raise ValueError(f"depth K={K} outside [0, {n0}]")
    if n0 > MAX_ENUMERATION_N0 and not allow_large:
        raise ValueError(f"refusing to enumerate tree bases for n0={n0} > {MAX_ENUMERATION_N0}")
    for cover in _covers(0, 0, K):
        yield TreeBasis(frozenset(cover))


def enumerate_covers(n0: int, K: int | None = None, allow_large: bool = False) -> list[tuple[Node, ...]]:
    """Same enumeration as :func:`enumerate_tree_bases` as plain node tuples
    (cheaper when only costs are needed)."""
    K = n0 if K is None else K
    if not 0 <= K <= n0:
        raise ValueError(f"depth K={K} outside [0, {n0}]")
    if n0 > MAX_ENUMERATION_N0 and not allow_large:
        raise ValueError(f"refusing to enumerate tree bases for n0={n0} > {MAX_ENUMERATION_N0}")
    return _covers(0, 0, K)


def reconstruct(table: DictionaryTable, selection: TreeBasis, filters: FilterPair = HAAR) -> np.ndarray:
    """Synthesize the signal from the coefficients of the selected nodes."""
    selection.validate(table.n0, table.K)

    def build(k, l):
        if (k, l) in selection.nodes:
            return np.array(table.node(k, l))
        return filters.lowpass_adjoint(build(k + 1, 2 * l)) + filters.highpass_adjoint(
            build(k + 1, 2 * l + 1)
        )

    return build(0, 0)
