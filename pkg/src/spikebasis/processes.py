"""Stochastic processes: the spike process, the 2D uniform counterexample and
a multi-spike variant, plus the closed-form spike covariance."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; bit-stable across platforms for a given seed."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SpikeProcess:
    """Emits one standard basis vector of R^n, uniformly at random."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"spike process needs a positive integer n, got {self.n!r}")

    def outcomes(self) -> np.ndarray:
        """Outcome vectors as rows (row j is e_j)."""
        return np.eye(self.n)

    def probabilities(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)


@dataclass(frozen=True, eq=False)
class DiscreteProcess:
    """A process with finitely many outcomes (rows of ``outcomes``)."""

    outcomes: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        outcomes = np.atleast_2d(np.asarray(self.outcomes, dtype=float))
        probs = np.asarray(self.probabilities, dtype=float).ravel()
        if outcomes.shape[0] != probs.size:
            raise ValueError("one probability per outcome is required")
        if np.any(probs < 0) or not np.isclose(probs.sum(), 1.0, atol=1e-12):
            raise ValueError("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probabilities", probs)

    @property
    def n(self) -> int:
        return self.outcomes.shape[1]

    @classmethod
    def from_spike(cls, process: SpikeProcess) -> "DiscreteProcess":
        return cls(process.outcomes(), process.probabilities())


@dataclass(frozen=True)
class Uniform2DProcess:
    """Two i.i.d. coordinates, each uniform on [-1, 1]."""

    low: float = field(default=-1.0, init=False)
    high: float = field(default=1.0, init=False)


@dataclass(frozen=True, eq=False)
class Dataset:
    """A training set: ``samples`` has one realization per row."""

    samples: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2:
            raise ValueError("samples must be a 2D array (count x n)")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def count(self) -> int:
        return self.samples.shape[0]

    def __len__(self):
        return self.count

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(self.n)])
        for row in self.samples:
            writer.writerow([f"{v:.12g}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "N": self.count,
                "provenance": self.provenance,
                "samples": [[float(f"{v:.12g}") for v in row] for row in self.samples],
            }
        )

    @classmethod
    def from_csv(cls, text: str) -> "Dataset":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and not _is_numeric_row(rows[0]):
            rows = rows[1:]
        return cls(np.array([[float(v) for v in row] for row in rows if row]))

    @classmethod
    def from_json(cls, text: str) -> "Dataset":
        obj = json.loads(text)
        return cls(np.array(obj["samples"], dtype=float), obj.get("provenance", {}))

    @classmethod
    def load(cls, path) -> "Dataset":
        path = Path(path)
        text = path.read_text()
        return cls.from_json(text) if path.suffix == ".json" else cls.from_csv(text)


def _is_numeric_row(row) -> bool:
    try:
        [float(v) for v in row]
    except ValueError:
        return False
    return True


def sample_spike(process: SpikeProcess, count: int, seed: int = 0) -> Dataset:
    if count < 1:
        raise ValueError("count must be >= 1")
    positions = make_rng(seed).integers(0, process.n, size=count)
    samples = np.zeros((count, process.n))
    samples[np.arange(count), positions] = 1.0
    return Dataset(samples, {"process": "spike", "n": process.n, "seed": seed})


def sample_multispike(n: int, m: int, count: int, seed: int = 0) -> Dataset:
    """Each realization has ``m`` unit spikes at distinct uniform positions."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = make_rng(seed)
    # argsort of uniform keys gives a uniform random permutation per row
    positions = np.argsort(rng.random((count, n)), axis=1)[:, :m]
    samples = np.zeros((count, n))
    np.put_along_axis(samples, positions, 1.0, axis=1)
    return Dataset(samples, {"process": "multispike", "n": n, "m": m, "seed": seed})


def enumerate_outcomes(process: SpikeProcess) -> list[tuple[np.ndarray, float]]:
    return [(e, 1.0 / process.n) for e in process.outcomes()]


def spike_dataset(n: int) -> Dataset:
    """Every outcome of the n-dimensional spike process exactly once.

    Averages over this dataset are exact expectations.
    """
    return Dataset(np.eye(n), {"process": "spike", "n": n, "enumeration": True})


def spike_covariance(n: int) -> np.ndarray:
    """``R_ij = delta_ij / n - 1/n^2``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.eye(n) / n - np.full((n, n), 1.0 / n**2)


def covariance_to_json(matrix: np.ndarray) -> str:
    matrix = np.asarray(matrix, dtype=float)
    return json.dumps(
        {"n": matrix.shape[0], "matrix": [[float(f"{v:.12g}") for v in row] for row in matrix]}
    )


def is_klb(basis, n: int, tol: float = 1e-10) -> bool:
    """Whether ``basis`` is a Karhunen-Loeve basis of the n-dim spike process.

    Two characterizations are computed (orthonormal + diagonalizes R, and
    orthonormal + contains a column parallel to the DC vector) and must agree.
    """
    matrix = np.asarray(getattr(basis, "matrix", basis), dtype=float)
    if matrix.shape != (n, n):
        raise ValueError(f"basis is {matrix.shape}, expected ({n}, {n})")
    orthonormal = np.allclose(matrix.T @ matrix, np.eye(n), atol=tol, rtol=0)
    if not orthonormal:
        return False
    rotated = matrix.T @ spike_covariance(n) @ matrix
    off_diagonal = rotated - np.diag(np.diag(rotated))
    # off-diagonal entries are -c_i c_j / n with c = B^T 1/sqrt(n), hence tol/n
    diagonalizes = bool(np.max(np.abs(off_diagonal), initial=0.0) <= tol / n)
    dc = np.ones(n) / np.sqrt(n)
    along = matrix.T @ dc
    residual = np.linalg.norm(matrix - np.outer(dc, along), axis=0)
    has_dc = bool(np.min(residual) <= tol)
    if diagonalizes != has_dc:
        raise RuntimeError("KLB characterizations disagree; tolerance too loose or too tight")
    return diagonalizes


def sample_uniform2d(count: int, seed: int = 0) -> Dataset:
    if count < 1:
        raise ValueError("count must be >= 1")
    samples = make_rng(seed).uniform(-1.0, 1.0, size=(count, 2))
    return Dataset(samples, {"process": "uniform2d", "seed": seed})
