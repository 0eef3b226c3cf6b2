"""Bases as matrices: group checks, closed-form LSDB constructions, row
class/index classification and canonicalization modulo permutation and sign.

A :class:`Basis` stores the *synthesis* matrix ``B`` (columns are basis
vectors); coefficients are ``y = B^{-1} x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

ORTHONORMAL = "orthonormal"
VOLUME_PRESERVING = "volume_preserving"
GENERAL_INVERTIBLE = "general_invertible"
GROUP_TAGS = (ORTHONORMAL, VOLUME_PRESERVING, GENERAL_INVERTIBLE)

DEFAULT_REL_TOL = 1e-9
GROUP_TOL = 1e-10


def det_tolerance(n: int) -> float:
    return 1e-12 * n


@dataclass(frozen=True, eq=False)
class Basis:
    matrix: np.ndarray
    group_tag: str = GENERAL_INVERTIBLE
    provenance: dict = field(default_factory=dict)
    inverse: np.ndarray | None = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"basis matrix must be square, got shape {matrix.shape}")
        if self.group_tag not in GROUP_TAGS:
            raise ValueError(f"unknown group tag {self.group_tag!r}")
        n = matrix.shape[0]
        det = np.linalg.det(matrix)
        if abs(det) <= det_tolerance(n):
            raise ValueError(f"basis matrix is singular (det={det:.3g})")
        if self.group_tag == ORTHONORMAL and not np.allclose(
            matrix.T @ matrix, np.eye(n), atol=GROUP_TOL, rtol=0
        ):
            raise ValueError("matrix tagged orthonormal is not orthonormal")
        if self.group_tag == VOLUME_PRESERVING and not abs(abs(det) - 1.0) <= GROUP_TOL:
            raise ValueError(f"matrix tagged volume_preserving has |det|={abs(det):.12g}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        if self.inverse is not None:
            inverse = np.array(self.inverse, dtype=float)
            if inverse.shape != matrix.shape:
                raise ValueError("inverse has the wrong shape")
            inverse.setflags(write=False)
            object.__setattr__(self, "inverse", inverse)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def analysis(self) -> np.ndarray:
        """``B^{-1}``: rows map a signal to its coefficients."""
        if self.inverse is not None:
            return self.inverse
        if self.group_tag == ORTHONORMAL:
            return self.matrix.T
        return np.linalg.inv(self.matrix)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    @classmethod
    def from_analysis(cls, analysis, group_tag=GENERAL_INVERTIBLE, provenance=None) -> "Basis":
        analysis = np.asarray(analysis, dtype=float)
        return cls(np.linalg.inv(analysis), group_tag, provenance or {}, inverse=analysis)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "group_tag": self.group_tag,
                "matrix": [[float(f"{v:.12g}") for v in row] for row in self.matrix],
                "provenance": self.provenance,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Basis":
        obj = json.loads(text)
        return cls(np.array(obj["matrix"], dtype=float), obj["group_tag"], obj.get("provenance", {}))


def standard_basis(n: int) -> Basis:
    return Basis(np.eye(n), ORTHONORMAL, {"constructor": "standard_basis", "n": n})


def walsh_basis(n: int) -> Basis:
    """Sylvester-ordered Walsh-Hadamard matrix scaled to be orthonormal."""
    if n < 1 or n & (n - 1):
        raise ValueError("Walsh basis needs a dyadic n")
    w = np.ones((1, 1))
    while w.shape[0] < n:
        w = np.block([[w, w], [w, -w]])
    return Basis(w / np.sqrt(n), ORTHONORMAL, {"constructor": "walsh_basis", "n": n})


def rotation_basis(theta: float) -> Basis:
    """Rotation of the plane by ``theta`` radians (columns are the rotated axes)."""
    c, s = np.cos(theta), np.sin(theta)
    return Basis(np.array([[c, -s], [s, c]]), ORTHONORMAL, {"constructor": "rotation_basis", "theta": theta})


# -- row classification -------------------------------------------------------


class RowClassification(NamedTuple):
    """Number of distinct values in a row and their sorted multiplicities."""

    class_k: int
    index_c: tuple[int, ...]


def _same(u, v, rel_tol):
    return abs(u - v) <= rel_tol * max(1.0, abs(u), abs(v))


def equality_labels(values, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Label entries of ``values`` by equality class.

    Two entries are equal iff ``|u - v| <= rel_tol * max(1, |u|, |v|)``;
    classes are formed by chaining sorted neighbours.
    """
    values = np.asarray(values, dtype=float).ravel()
    order = np.argsort(values, kind="stable")
    labels = np.empty(values.size, dtype=int)
    current = -1
    previous = None
    for idx in order:
        v = values[idx]
        if previous is None or not _same(previous, v, rel_tol):
            current += 1
        labels[idx] = current
        previous = v
    return labels


def classify_row(row, rel_tol: float = DEFAULT_REL_TOL) -> RowClassification:
    labels = equality_labels(row, rel_tol)
    counts = np.bincount(labels)
    return RowClassification(int(counts.size), tuple(sorted(int(c) for c in counts)))


# -- closed-form LSDB constructions --------------------------------------------


def householder_dc(n: int) -> Basis:
    """Reflection ``I - (2/n) 1 1^T`` across the hyperplane orthogonal to the DC vector."""
    if n < 2:
        raise ValueError("n must be >= 2")
    matrix = np.full((n, n), -2.0 / n)
    np.fill_diagonal(matrix, (n - 2.0) / n)
    return Basis(matrix, ORTHONORMAL, {"constructor": "householder_dc", "n": n})


def lsdb_orthonormal(n: int) -> tuple[Basis, ...]:
    """Least statistically-dependent bases of the spike process within O(n).

    For n >= 5 both optima (standard basis and the Householder reflection)
    are returned; smaller n have a single optimum.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n >= 5:
        return (standard_basis(n), householder_dc(n))
    if n == 4:
        return (walsh_basis(4),)
    if n == 3:
        s3, s6, s2 = np.sqrt(3.0), np.sqrt(6.0), np.sqrt(2.0)
        matrix = np.array(
            [
                [1 / s3, 1 / s6, 1 / s2],
                [1 / s3, 1 / s6, -1 / s2],
                [1 / s3, -2 / s6, 0.0],
            ]
        )
        return (Basis(matrix, ORTHONORMAL, {"constructor": "lsdb_orthonormal", "n": 3}),)
    matrix = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return (Basis(matrix, ORTHONORMAL, {"constructor": "lsdb_orthonormal", "n": 2}),)


@dataclass(frozen=True)
class GLLSDBParams:
    """Parameters of the GL(n) LSDB pair: ``a`` fills the first analysis row,
    row k has ``c_k`` on the diagonal and ``b_k`` elsewhere."""

    a: float
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        if len(self.b) != len(self.c) or not self.b:
            raise ValueError("b and c must have the same positive length n-1")
        if self.a == 0:
            raise ValueError("a must be nonzero")
        if any(bk == ck for bk, ck in zip(self.b, self.c)):
            raise ValueError("b_k == c_k makes the analysis matrix singular")

    @property
    def n(self) -> int:
        return len(self.b) + 1

    @classmethod
    def constant(cls, n: int, a: float, b: float, c: float) -> "GLLSDBParams":
        return cls(a, (b,) * (n - 1), (c,) * (n - 1))


def lsdb_gl_pair(params: GLLSDBParams) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(analysis, synthesis)`` matrices of the GL(n) LSDB pair.

    The synthesis matrix is the closed-form inverse, not a numerical one.
    """
    n = params.n
    a = params.a
    b = np.asarray(params.b)
    c = np.asarray(params.c)
    d = 1.0 / (c - b)

    analysis = np.empty((n, n))
    analysis[0, :] = a
    analysis[1:, :] = b[:, None]
    analysis[np.arange(1, n), np.arange(1, n)] = c

    synthesis = np.zeros((n, n))
    synthesis[0, 0] = (1.0 + np.sum(b * d)) / a
    synthesis[0, 1:] = -d
    synthesis[1:, 0] = -b * d / a
    synthesis[np.arange(1, n), np.arange(1, n)] = d
    return analysis, synthesis


def gl_lsdb_basis(params: GLLSDBParams) -> Basis:
    analysis, synthesis = lsdb_gl_pair(params)
    det = abs(np.prod(np.asarray(params.c) - np.asarray(params.b)) * params.a)
    tag = VOLUME_PRESERVING if abs(det - 1.0) <= GROUP_TOL else GENERAL_INVERTIBLE
    provenance = {"constructor": "lsdb_gl_pair", "a": params.a, "b": list(params.b), "c": list(params.c)}
    return Basis(synthesis, tag, provenance, inverse=analysis)


def gl_lsdb_sl_constraint(b: Sequence[float], c: Sequence[float]) -> float:
    """Positive value of ``a`` that makes the analysis matrix volume-preserving;
    ``-a`` works equally."""
    diffs = np.asarray(c, dtype=float) - np.asarray(b, dtype=float)
    if np.any(diffs == 0):
        raise ValueError("b_k == c_k")
    return float(abs(1.0 / np.prod(diffs)))


def delta_determinant(a: float, b: float, n: int) -> float:
    """Determinant of ``a I_n + b J_n``: ``a^{n-1} (a + n b)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return a ** (n - 1) * (a + n * b)


def apply_analysis(basis: Basis, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != basis.n:
        raise ValueError(f"vector length {x.shape[-1]} does not match basis size {basis.n}")
    return x @ basis.analysis.T


def apply_synthesis(basis: Basis, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != basis.n:
        raise ValueError(f"vector length {y.shape[-1]} does not match basis size {basis.n}")
    return y @ basis.matrix.T


# -- canonical form modulo column permutation and sign flip --------------------


def canonicalize(matrix, decimals: int = 9) -> np.ndarray:
    """Canonical representative of a basis modulo column permutations and
    sign flips.

    Each column is flipped so its largest-magnitude entry is positive (the
    first such entry on ties), then columns are sorted by the row position of
    that entry and lexicographically after rounding.
    """
    m = np.array(getattr(matrix, "matrix", matrix), dtype=float)
    scale = np.max(np.abs(m), axis=0)
    tol = 10.0 ** (-decimals)
    keys = []
    for j in range(m.shape[1]):
        col = m[:, j]
        lead = int(np.flatnonzero(np.abs(col) >= scale[j] - tol)[0])
        if col[lead] < 0:
            m[:, j] = -col
        keys.append((lead, tuple(np.round(m[:, j], decimals))))
    order = sorted(range(m.shape[1]), key=lambda j: keys[j])
    return m[:, order]


def equivalent(a, b, atol: float = 1e-9) -> bool:
    ca, cb = canonicalize(a), canonicalize(b)
    return ca.shape == cb.shape and bool(np.allclose(ca, cb, atol=atol, rtol=0))


def random_orthonormal(n: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-distributed orthonormal matrices via QR of standard normals."""
    shape = (n, n) if size is None else (size, n, n)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return q * signs[..., None, :]
