"""Scalar closed forms for coordinate-wise entropies of the spike process.

All logarithms are base 2 and ``0 log 0 = 0``.  Every function accepts a
scalar or an array; scalars come back as Python floats.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

LOG2_E = 1.0 / math.log(2.0)


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _check_unit_interval(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise ValueError(f"{name} is defined on [0, 1]")
    return arr


def f(x):
    """Binary entropy ``-[x log x + (1-x) log(1-x)]`` in bits."""
    x = _check_unit_interval(x, "f")
    return _out(-(_xlog2x(x) + _xlog2x(1.0 - x)))


def g(x):
    """Entropy of a three-valued coordinate: ``-[x log(x/2) + (1-x) log(1-x)]``.

    Equal to ``f(x) + x``; the explicit form is used so the identity can be
    checked rather than assumed.
    """
    x = _check_unit_interval(x, "g")
    safe = np.where(x > 0, x, 1.0)
    # log2(x/2) as log2(x) - 1 so subnormal x does not underflow to log 0
    term = np.where(x > 0, x * (np.log2(safe) - 1.0), 0.0)
    return _out(-(term + _xlog2x(1.0 - x)))


def _check_level(k, n0):
    if n0 < 0 or k < 0 or k > n0:
        raise ValueError(f"level k={k} outside [0, {n0}]")


def h_plus(k: int, n0: int) -> float:
    """Entropy of one coordinate of the positive node at level ``k`` (n = 2**n0)."""
    _check_level(k, n0)
    return f(2.0 ** (k - n0))


def h_minus(k: int, n0: int) -> float:
    """Entropy of one coordinate of a negative node at level ``k``."""
    _check_level(k, n0)
    return g(2.0 ** (k - n0))


def r(x):
    """``x [(2/x) f(1/x) - (f(2/x) - f(1/x))]`` for ``x >= 2``.

    Negative exactly when the class-3 lower bound beats the class-2
    ``(2, n-2)`` bound, which is what makes the standard basis optimal
    among orthonormal bases for n >= 6.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 2):
        raise ValueError("r is defined for x >= 2")
    f1 = np.asarray(f(1.0 / x))
    f2 = np.asarray(f(2.0 / x))
    return _out(x * ((2.0 / x) * f1 - (f2 - f1)))


def r_root(lo: float = 5.0, hi: float = 6.0, tol: float = 1e-9) -> float:
    """Zero of ``r`` by bisection; ``r`` is monotone on ``[5, 6]``."""
    r_lo, r_hi = r(lo), r(hi)
    if r_lo * r_hi > 0:
        raise ValueError("r does not change sign on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        r_mid = r(mid)
        if (r_mid > 0) == (r_lo > 0):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def s_p(x, p: float):
    """Expected l^p cost of the spike process under the Householder DC
    reflection, written in ``x = 2/n``: ``(1-x)^p + (2/x - 1) x^p``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x > 1):
        raise ValueError("s_p is defined for 0 < x <= 1")
    return _out((1.0 - x) ** p + (2.0 / x - 1.0) * x**p)


def _check_n(n, minimum=2):
    arr = np.asarray(n, dtype=float)
    if np.any(arr < minimum):
        raise ValueError(f"n must be >= {minimum}")
    return arr


def gl_mutual_information(n):
    """Mutual information of the spike process under the GL(n) LSDB, in bits.

    Algebraically ``(n-2) log n - ((n-1)^2/n) log(n-1)``; evaluated as
    ``-(log n)/n - ((n-1)^2/n) log(1 - 1/n)`` to avoid cancellation at large n.
    """
    n = _check_n(n)
    value = -np.log2(n) / n - ((n - 1.0) ** 2 / n) * np.log1p(-1.0 / n) * LOG2_E
    return _out(np.where(n == 2, 0.0, value))


def gl_mutual_information_ln(x):
    """``ln 2 * h(x)``, the natural-log version used for the asymptotic check."""
    return _out(np.asarray(gl_mutual_information(x)) * math.log(2.0))


def og_mutual_information(n):
    """Mutual information under the standard (or Householder) basis:
    ``(n-1) log(n/(n-1))``."""
    n = _check_n(n)
    return _out(-(n - 1.0) * np.log1p(-1.0 / n) * LOG2_E)


def standard_basis_cost(n):
    """Total coordinate-wise entropy of the standard basis,
    ``n log n - (n-1) log(n-1)``."""
    n = np.asarray(_check_n(n), dtype=float)
    # rewritten as log n - (n-1) log(1 - 1/n) to avoid cancellation at large n
    return _out(np.log2(n) - (n - 1.0) * np.log1p(-1.0 / n) * LOG2_E)


def entropy_lower_bound(class_k: int, n: int) -> float:
    """Smallest coordinate entropy achievable by a row with ``class_k``
    distinct values (the k=2 branch assumes index ``(1, n-1)``)."""
    if not 1 <= class_k <= n:
        raise ValueError(f"class must lie in [1, {n}]")
    if class_k == 1:
        return 0.0
    if class_k == 2:
        return f(1.0 / n)
    return (1.0 + 2.0 * (class_k - 2) / n) * f(1.0 / n)


def index_entropy(index: Iterable[int], n: int) -> float:
    """Exact coordinate entropy for a row whose equality classes have the
    given multiplicities."""
    alphas = np.asarray(list(index), dtype=float)
    if np.any(alphas < 1) or int(alphas.sum()) != n:
        raise ValueError(f"index {tuple(index)} is not a composition of {n}")
    return float(-np.sum(_xlog2x(alphas / n)))


# Curves for plotting; the grid step is fixed so fixtures are reproducible.
CURVE_DOMAINS = {
    "f": (0.0, 1.0),
    "g": (0.0, 1.0),
    "gg2": (0.0, 0.5),
    "h": (2.0, 100.0),
    "r": (2.0, 10.0),
    "s_p": (0.001, 1.0),
}


def curve(name: str, step: float = 1e-3, p: float = 0.5, lo=None, hi=None):
    """Return ``(x, value)`` arrays for one of the named curves.

    ``h`` is emitted as ``ln 2 * h(x)`` so its asymptote is 1.
    """
    if name not in CURVE_DOMAINS:
        raise ValueError(f"unknown curve {name!r}; choose from {sorted(CURVE_DOMAINS)}")
    d_lo, d_hi = CURVE_DOMAINS[name]
    lo = d_lo if lo is None else lo
    hi = d_hi if hi is None else hi
    count = int(round((hi - lo) / step)) + 1
    x = lo + step * np.arange(count)
    x = np.clip(x, lo, hi)
    if name == "f":
        y = f(x)
    elif name == "g":
        y = g(x)
    elif name == "gg2":
        y = np.asarray(g(x)) - np.asarray(g(2.0 * x))
    elif name == "h":
        y = gl_mutual_information_ln(x)
    elif name == "r":
        y = r(x)
    else:
        y = s_p(x, p)
    return x, np.asarray(y, dtype=float)


def gg2_root(lo: float = 0.3, hi: float = 0.5, tol: float = 1e-12) -> float:
    """Crossing of ``g(x) - g(2x)`` from negative to positive."""
    fn = lambda x: g(x) - g(2.0 * x)  # noqa: E731
    if fn(lo) >= 0 or fn(hi) <= 0:
        raise ValueError("g(x) - g(2x) does not change sign on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
