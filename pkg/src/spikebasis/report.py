"""Delimited output and figures for the command-line front end.

Numbers are written with 12 significant digits so artifacts diff cleanly.
Figures go through the Agg canvas directly; nothing here touches pyplot's
global state.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from .dictionary import TreeBasis

MAX_OUTLINED_N0 = 8
SUMMARY_COLUMNS = ("claim_id", "status", "observed", "expected", "tol")


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def curve_csv(name: str, step: float, x, y) -> str:
    """Curve table; the leading comment line names the function and step."""
    return f"# function={name} step={step:g}\n" + csv_text(("x", "value"), zip(x, y))


def jsonl_text(reports) -> str:
    return "".join(r.to_json() + "\n" for r in reports)


def summary_csv(reports) -> str:
    return csv_text(SUMMARY_COLUMNS, ([r.summary_row()[c] for c in SUMMARY_COLUMNS] for r in reports))


def sibling(path, suffix: str, ext: str) -> Path:
    """``out/run.jsonl`` -> ``out/run_summary.csv`` style companion paths."""
    path = Path(path)
    return path.with_name(f"{path.stem}{suffix}{ext}")


def emit(text: str, out=None) -> None:
    """Write ``text`` to ``out`` or to stdout."""
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def selection_csv(results) -> str:
    rows = []
    for r in results:
        nodes = ";".join(f"{k}:{l}" for k, l in sorted(r.selection.nodes))
        rows.append((nodes, r.total_cost, r.cost_kind, r.n0, r.K))
    return csv_text(("selection", "total_cost", "cost_kind", "n0", "K"), rows)


def results_json(results) -> str:
    if len(results) == 1:
        return results[0].to_json() + "\n"
    return "".join(r.to_json() + "\n" for r in results)


# -- figures ------------------------------------------------------------------


def _figure(width=6.0, height=4.0):
    fig = Figure(figsize=(width, height), layout="constrained")
    FigureCanvasAgg(fig)
    return fig


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    return path


def plot_curve(name: str, x, y, path, ylabel: str | None = None) -> Path:
    fig = _figure()
    ax = fig.add_subplot()
    ax.plot(x, y, lw=1.5)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel(ylabel or name)
    ax.set_title(name)
    return _save(fig, path)


def plot_realizations(samples, path, max_rows: int = 10) -> Path:
    """Stem plot of the first few realizations, one panel each."""
    samples = np.asarray(samples)[:max_rows]
    fig = _figure(6.0, 0.9 * len(samples) + 0.6)
    axes = fig.subplots(len(samples), 1, sharex=True, squeeze=False)[:, 0]
    idx = np.arange(samples.shape[1])
    for ax, row in zip(axes, samples):
        ax.vlines(idx, 0.0, row, lw=1.0)
        ax.set_yticks([])
        ax.set_ylim(min(0.0, row.min()) - 0.1, max(1.0, row.max()) + 0.1)
    axes[-1].set_xlabel("index")
    return _save(fig, path)


def plot_scatter2d(samples, path, max_points: int = 5_000) -> Path:
    samples = np.asarray(samples)[:max_points]
    fig = _figure(4.5, 4.5)
    ax = fig.add_subplot()
    ax.plot(samples[:, 0], samples[:, 1], ".", ms=1.5)
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    return _save(fig, path)


def plot_rotation_costs(angles, lp, entropy, path) -> Path:
    fig = _figure(6.0, 5.0)
    top, bottom = fig.subplots(2, 1, sharex=True)
    top.plot(angles, lp, lw=1.5)
    top.set_ylabel("C_1")
    bottom.plot(angles, entropy, lw=1.5, color="C1")
    bottom.set_ylabel("C_H (bits)")
    bottom.set_xlabel("rotation (degrees)")
    for ax, values in ((top, lp), (bottom, entropy)):
        ax.axvline(angles[int(np.argmin(values))], color="0.5", ls="--", lw=0.8)
    return _save(fig, path)


def plot_selection(selection: TreeBasis, n0: int, path, node_costs=None) -> Path:
    """Tree tiling with the selected nodes filled."""
    fig = _figure(6.0, 0.45 * (n0 + 1) + 0.8)
    ax = fig.add_subplot()
    # unselected cells are only outlined for small trees
    cells = (
        [(k, l) for k in range(n0 + 1) for l in range(2**k)]
        if n0 <= MAX_OUTLINED_N0
        else sorted(selection.nodes)
    )
    for k, l in cells:
        width = 1.0 / 2**k
        chosen = (k, l) in selection.nodes
        ax.add_patch(
            Rectangle(
                (l * width, k), width, 1.0,
                facecolor="C0" if chosen else "white", edgecolor="0.3", lw=0.6,
            )
        )
        if chosen and node_costs is not None and 2**k <= 16:
            ax.text((l + 0.5) * width, k + 0.5, f"{node_costs[(k, l)]:.3g}", ha="center", va="center", fontsize=7)
    ax.set_xlim(0, 1)
    ax.set_ylim(n0 + 1, 0)
    ax.set_xticks([])
    ax.set_yticks(np.arange(n0 + 1) + 0.5, [str(k) for k in range(n0 + 1)])
    ax.set_ylabel("level")
    return _save(fig, path)


def plot_matrix(matrix, path, title: str = "") -> Path:
    matrix = np.asarray(matrix)
    fig = _figure(4.5, 4.0)
    ax = fig.add_subplot()
    bound = float(np.max(np.abs(matrix))) or 1.0
    im = ax.imshow(matrix, cmap="RdBu_r", vmin=-bound, vmax=bound)
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title(title)
    return _save(fig, path)


def dumps(obj) -> str:
    return json.dumps(obj) + "\n"
