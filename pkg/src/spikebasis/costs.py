"""Sparsity (l^p, l^0) and statistical-dependence (sum of coordinate
entropies) costs, exact for discrete processes and empirical for samples.

Entropies are in bits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bases import DEFAULT_REL_TOL, Basis, apply_analysis, equality_labels
from .processes import Dataset, DiscreteProcess, SpikeProcess

COST_KINDS = ("lp", "l0", "entropy_empirical", "entropy_exact")
DEFAULT_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class CostValue:
    value: float
    kind: str
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ValueError(f"unknown cost kind {self.kind!r}")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class HistogramEstimator:
    """Equal-width bins over each coordinate's observed range.

    ``rule="sqrt_n"`` uses ``ceil(sqrt(N))`` bins; ``rule="fixed"`` uses ``bins``.
    """

    rule: str = "sqrt_n"
    bins: int | None = None

    def __post_init__(self):
        if self.rule not in ("sqrt_n", "fixed"):
            raise ValueError(f"unknown bin rule {self.rule!r}")
        if self.rule == "fixed" and (self.bins is None or self.bins < 1):
            raise ValueError("fixed rule needs bins >= 1")

    def bin_count(self, N: int) -> int:
        return int(math.ceil(math.sqrt(N))) if self.rule == "sqrt_n" else int(self.bins)

    def params(self) -> dict:
        return {"rule": self.rule, "bins": self.bins}


def _coefficients(data: Dataset, basis: Basis) -> np.ndarray:
    if data.n != basis.n:
        raise ValueError(f"dataset dimension {data.n} does not match basis size {basis.n}")
    return apply_analysis(basis, data.samples)


def lp_cost(data: Dataset, basis: Basis, p: float = 1.0) -> CostValue:
    """Sample mean of ``||B^{-1} x||_p^p``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    y = _coefficients(data, basis)
    return CostValue(float(np.mean(np.sum(np.abs(y) ** p, axis=1))), "lp")


def l0_cost(data: Dataset, basis: Basis, zero_tol: float = DEFAULT_ZERO_TOL) -> CostValue:
    """Mean number of coefficients with magnitude above ``zero_tol``."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be >= 0")
    y = _coefficients(data, basis)
    return CostValue(float(np.mean(np.sum(np.abs(y) > zero_tol, axis=1))), "l0")


def discrete_entropy(values, probabilities, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Entropy of a scalar variable taking ``values[i]`` with ``probabilities[i]``
    (equal values, under the class tolerance, are merged)."""
    labels = equality_labels(values, rel_tol)
    mass = np.bincount(labels, weights=np.asarray(probabilities, dtype=float))
    mass = mass[mass > 0]
    return float(-np.sum(mass * np.log2(mass)))


def coordinate_entropies(values, probabilities, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Per-coordinate entropies for outcomes in rows of ``values``."""
    values = np.asarray(values, dtype=float)
    return np.array(
        [discrete_entropy(values[:, i], probabilities, rel_tol) for i in range(values.shape[1])]
    )


def _as_discrete(process) -> DiscreteProcess:
    if isinstance(process, SpikeProcess):
        return DiscreteProcess.from_spike(process)
    if isinstance(process, DiscreteProcess):
        return process
    raise TypeError("process must expose an explicit outcome enumeration")


def entropy_exact_discrete(process, basis: Basis, rel_tol: float = DEFAULT_REL_TOL) -> CostValue:
    """Sum of exact coordinate entropies of ``Y = B^{-1} X``."""
    discrete = _as_discrete(process)
    if discrete.n != basis.n:
        raise ValueError("process and basis dimensions differ")
    y = apply_analysis(basis, discrete.outcomes)
    total = float(np.sum(coordinate_entropies(y, discrete.probabilities, rel_tol)))
    return CostValue(total, "entropy_exact")


def joint_entropy_exact(process, basis: Basis, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Entropy of the whole vector ``Y``; two outcomes merge only if every
    coordinate matches."""
    discrete = _as_discrete(process)
    y = apply_analysis(basis, discrete.outcomes)
    labels = np.column_stack([equality_labels(y[:, i], rel_tol) for i in range(y.shape[1])])
    _, groups = np.unique(labels, axis=0, return_inverse=True)
    mass = np.bincount(groups.ravel(), weights=discrete.probabilities)
    mass = mass[mass > 0]
    return float(-np.sum(mass * np.log2(mass)))


def histogram_entropies(values, estimator: HistogramEstimator = HistogramEstimator()):
    """Plug-in differential entropy (bits) of each column of ``values``.

    Returns ``(entropies, degenerate)``; a column with zero range contributes
    0 and is marked degenerate.
    """
    values = np.asarray(values, dtype=float)
    N, d = values.shape
    if N < 2:
        raise ValueError("need at least two samples")
    bins = estimator.bin_count(N)
    out = np.zeros(d)
    degenerate = np.zeros(d, dtype=bool)
    for i in range(d):
        col = values[:, i]
        lo, hi = col.min(), col.max()
        if hi - lo <= 1e-12 * max(1.0, abs(lo), abs(hi)):
            degenerate[i] = True
            continue
        counts, edges = np.histogram(col, bins=bins, range=(lo, hi))
        width = edges[1] - edges[0]
        prob = counts[counts > 0] / N
        # -E log f_hat with f_hat = prob / width on each bin
        out[i] = float(-np.sum(prob * np.log2(prob / width)))
    return out, degenerate


def entropy_empirical(
    data: Dataset, basis: Basis, estimator: HistogramEstimator = HistogramEstimator()
) -> CostValue:
    y = _coefficients(data, basis)
    entropies, degenerate = histogram_entropies(y, estimator)
    flags = tuple(f"degenerate:{i}" for i in np.flatnonzero(degenerate))
    return CostValue(float(np.sum(entropies)), "entropy_empirical", flags)


def mutual_information_spike(basis: Basis, n: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``sum_i H(Y_i) - log n`` for the n-dimensional spike process."""
    if basis.n != n:
        raise ValueError("basis size does not match n")
    return entropy_exact_discrete(SpikeProcess(n), basis, rel_tol).value - math.log2(n)


def additive_cost(node_values, kind: str = "lp", p: float = 1.0, zero_tol: float = DEFAULT_ZERO_TOL) -> float:
    """Additive cost of a node: the sum of a per-coordinate cost.

    ``kind="lp"`` sums ``|v|^p``, ``"l0"`` counts nonzeros and ``"sum"`` adds
    values that already are per-coordinate costs (e.g. coordinate entropies).
    """
    v = np.asarray(node_values, dtype=float).ravel()
    if kind == "lp":
        return float(np.sum(np.abs(v) ** p))
    if kind == "l0":
        return float(np.count_nonzero(np.abs(v) > zero_tol))
    if kind == "sum":
        return float(np.sum(v))
    raise ValueError(f"unknown additive cost kind {kind!r}")


@dataclass
class CostReport:
    basis_provenance: dict
    cost_kind: str
    value: float
    n: int
    N: int | None = None
    estimator_params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "basis_provenance": self.basis_provenance,
                "cost_kind": self.cost_kind,
                "value_bits_or_raw": float(f"{self.value:.12g}"),
                "n": self.n,
                "N": self.N,
                "estimator_params": self.estimator_params,
            }
        )
