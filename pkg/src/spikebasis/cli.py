"""Command-line front end: ``spikebasis {sample,bestbasis,lsdb,curves,verify}``.

Every command is deterministic given its flags and seed.  ``--seed``
defaults to ``$SPIKEBASIS_SEED`` or 0.  Numbers carry 12 significant digits.
With ``--figure`` a PNG is written next to ``--out``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from . import analytic, report
from .bases import (
    Basis,
    GLLSDBParams,
    gl_lsdb_basis,
    gl_lsdb_sl_constraint,
    lsdb_gl_pair,
    lsdb_orthonormal,
)
from .bestbasis import (
    CostSpec,
    best_basis,
    best_basis_exact_spike,
    best_basis_per_realization,
)
from .costs import HistogramEstimator, entropy_exact_discrete, l0_cost, lp_cost
from .dictionary import analyze, dyadic_exponent
from .processes import (
    Dataset,
    SpikeProcess,
    sample_multispike,
    sample_spike,
    sample_uniform2d,
    spike_dataset,
)
from .verify import CLAIMS, VIOLATED, rotation_cost_curves, run_claim

FORMATS = click.Choice(["json", "csv"])


def _seed_option(f):
    return click.option(
        "--seed", type=int, default=0, envvar="SPIKEBASIS_SEED", show_default=True,
        help="RNG seed (env SPIKEBASIS_SEED overrides the default).",
    )(f)


def _out_options(f):
    f = click.option("--figure", is_flag=True, help="Also write a PNG next to --out.")(f)
    f = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Output file (default: stdout).")(f)
    f = click.option("--format", "fmt", type=FORMATS, default="json", show_default=True, help="Output format.")(f)
    return f


def _figure_path(out, figure, suffix=""):
    if not figure:
        return None
    if out is None:
        raise click.UsageError("--figure needs --out")
    return report.sibling(out, suffix, ".png")


def _write(text, out):
    try:
        report.emit(text, out)
    except OSError as exc:
        raise click.ClickException(f"cannot write {out}: {exc}") from exc


@click.group(context_settings={"help_option_names": ["-h", "--help"], "show_default": True})
def main():
    """Sparsity versus statistical independence on the spike process."""


@main.command()
@click.option("--process", type=click.Choice(["spike", "uniform2d", "multispike"]), default="spike")
@click.option("--n", type=int, default=256, help="Dimension (ignored for uniform2d).")
@click.option("--m", type=int, default=2, help="Spikes per realization (multispike).")
@click.option("--count", type=int, default=10, help="Number of realizations.")
@_seed_option
@_out_options
def sample(process, n, m, count, seed, fmt, out, figure):
    """Draw realizations of a process."""
    try:
        if process == "spike":
            data = sample_spike(SpikeProcess(n), count, seed)
        elif process == "multispike":
            data = sample_multispike(n, m, count, seed)
        else:
            data = sample_uniform2d(count, seed)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    fig_path = _figure_path(out, figure)
    _write(data.to_json() + "\n" if fmt == "json" else data.to_csv(), out)
    if fig_path:
        if process == "uniform2d":
            report.plot_scatter2d(data.samples, fig_path)
        else:
            report.plot_realizations(data.samples, fig_path)


def _cost_spec(cost, p, entropy_mode, bins):
    estimator = HistogramEstimator("fixed", bins) if bins else HistogramEstimator()
    return CostSpec(cost, p=p, entropy_mode=entropy_mode, estimator=estimator)


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="Dataset file (.csv or .json).")
@click.option("--process", type=click.Choice(["spike"]), default=None, help="Use the spike process instead of a file.")
@click.option("--exact", is_flag=True, help="Closed-form node costs (spike process only).")
@click.option("--n0", type=int, default=None, help="log2 of the dimension for --process spike.")
@click.option("--cost", type=click.Choice(["entropy", "lp", "l0"]), default="entropy")
@click.option("--p", type=float, default=1.0, help="Exponent for --cost lp.")
@click.option("--entropy-mode", type=click.Choice(["discrete", "histogram"]), default="discrete")
@click.option("--bins", type=int, default=None, help="Fixed histogram bin count (default ceil(sqrt(N))).")
@click.option("--K", "depth", type=int, default=None, help="Tree depth (default: full).")
@click.option("--per-realization", is_flag=True, help="One selection per sample instead of one for the set.")
@_seed_option
@_out_options
def bestbasis(input_path, process, exact, n0, cost, p, entropy_mode, bins, depth, per_realization, seed, fmt, out, figure):
    """Best Haar-Walsh basis for a dataset or the spike process."""
    if (input_path is None) == (process is None):
        raise click.UsageError("give exactly one of --input or --process")
    try:
        if process == "spike":
            if n0 is None:
                raise click.UsageError("--process spike needs --n0")
            if exact:
                if cost == "l0" or per_realization:
                    raise click.UsageError("--exact supports entropy or lp costs for the whole process")
                results = [best_basis_exact_spike(n0, cost, p, depth)]
                data = None
            else:
                data = spike_dataset(2**n0)
        else:
            if exact:
                raise click.UsageError("--exact needs --process spike")
            data = Dataset.load(input_path)
            dyadic_exponent(data.n)
        if data is not None:
            spec = _cost_spec(cost, p, entropy_mode, bins)
            if per_realization:
                results = best_basis_per_realization(data, spec, depth)
            else:
                results = [best_basis(analyze(data.samples, depth), spec, depth)]
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    fig_path = _figure_path(out, figure)
    _write(report.results_json(results) if fmt == "json" else report.selection_csv(results), out)
    if fig_path:
        first = results[0]
        report.plot_selection(first.selection, first.n0, fig_path, first.per_node_costs)


def _parse_params(params, a, b, c):
    if params:
        parts = [float(v) for v in params.split(",")]
        if len(parts) != 3:
            raise click.BadParameter("--params expects a,b,c")
        return parts
    return a, b, c


def _spike_summary(basis: Basis, n: int) -> dict:
    data = spike_dataset(n)
    entropy = entropy_exact_discrete(SpikeProcess(n), basis).value
    return {
        "entropy_bits": entropy,
        "mutual_information": entropy - math.log2(n),
        "C1": lp_cost(data, basis, 1.0).value,
        "C0": l0_cost(data, basis).value,
        "determinant": basis.determinant,
    }


@main.command()
@click.option("--group", type=click.Choice(["og", "gl"]), default="og", help="Orthonormal or general invertible.")
@click.option("--n", type=int, default=5)
@click.option("--params", default=None, help="GL parameters as a,b,c (constant over rows).")
@click.option("--a", type=float, default=None, help="First-row value (default: unit determinant).")
@click.option("--b", type=float, default=1.0, help="Off-diagonal value of rows 2..n.")
@click.option("--c", type=float, default=2.0, help="Diagonal value of rows 2..n.")
@_seed_option
@_out_options
def lsdb(group, n, params, a, b, c, seed, fmt, out, figure):
    """Least statistically-dependent bases of the spike process."""
    entries = []
    try:
        if group == "og":
            for idx, basis in enumerate(lsdb_orthonormal(n)):
                entries.append((f"og_{idx}", basis, basis.analysis))
        else:
            a, b, c = _parse_params(params, a, b, c)
            if a is None:
                a = gl_lsdb_sl_constraint([b] * (n - 1), [c] * (n - 1))
            gl = GLLSDBParams.constant(n, a, b, c)
            analysis, _ = lsdb_gl_pair(gl)
            entries.append(("gl", gl_lsdb_basis(gl), analysis))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    summaries = [(name, basis, analysis, _spike_summary(basis, n)) for name, basis, analysis in entries]
    if fmt == "json":
        doc = {
            "group": group,
            "n": n,
            "bases": [
                {
                    "name": name,
                    "synthesis": json.loads(basis.to_json()),
                    "analysis": [[float(f"{v:.12g}") for v in row] for row in analysis],
                    "costs": {k: float(f"{v:.12g}") for k, v in summary.items()},
                }
                for name, basis, analysis, summary in summaries
            ],
        }
        text = json.dumps(doc) + "\n"
    else:
        rows = []
        for name, _, analysis, _ in summaries:
            rows += [(name, "analysis", i, *row) for i, row in enumerate(analysis)]
        text = report.csv_text(("basis", "role", "row", *[f"c{j + 1}" for j in range(n)]), rows)
        keys = list(summaries[0][3])
        summary_text = report.csv_text(("basis", *keys), [(name, *[s[k] for k in keys]) for name, _, _, s in summaries])
        if out is None:
            text += "\n" + summary_text
        else:
            _write(summary_text, report.sibling(out, "_summary", ".csv"))
    fig_path = _figure_path(out, figure)
    _write(text, out)
    if fig_path:
        name, _, analysis, _ = summaries[-1]
        report.plot_matrix(analysis, fig_path, f"{name} analysis, n={n}")


@main.command()
@click.option("--function", "name", type=click.Choice(sorted(analytic.CURVE_DOMAINS)), required=True)
@click.option("--step", type=float, default=1e-3, help="Grid step.")
@click.option("--p", type=float, default=0.5, help="Exponent for s_p.")
@_seed_option
@_out_options
def curves(name, step, p, seed, fmt, out, figure):
    """Tabulate one of the closed-form curves (h is emitted as ln2 * h)."""
    try:
        x, y = analytic.curve(name, step=step, p=p)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    if fmt == "csv":
        text = report.curve_csv(name, step, x, y)
    else:
        text = json.dumps({
            "function": name,
            "step": step,
            "x": [float(f"{v:.12g}") for v in x],
            "value": [float(f"{v:.12g}") for v in y],
        }) + "\n"
    fig_path = _figure_path(out, figure)
    _write(text, out)
    if fig_path:
        label = "ln 2 * h" if name == "h" else name
        report.plot_curve(label, x, y, fig_path)


@main.command()
@click.option("--claim", type=click.Choice([*CLAIMS, "all"]), default="all")
@click.option("--trials", type=int, default=10_000, help="Random starts for the searches over O(n).")
@_seed_option
@_out_options
def verify(claim, trials, seed, fmt, out, figure):
    """Check the optimality claims; exit status 1 on any violation.

    JSON output is one report per line; with --out a summary CSV is written
    beside it.
    """
    reports = run_claim(claim, seed, trials)
    text = report.jsonl_text(reports) if fmt == "json" else report.summary_csv(reports)
    _write(text, out)
    if out is not None and fmt == "json":
        _write(report.summary_csv(reports), report.sibling(out, "_summary", ".csv"))
    fig_path = _figure_path(out, figure, "_rotation")
    if fig_path and claim in ("counterexample", "all"):
        angles, lp, ent = rotation_cost_curves(seed=seed)
        report.plot_rotation_costs(angles, lp, ent, fig_path)
    bad = [r.claim_id for r in reports if r.status == VIOLATED]
    for r in reports:
        click.echo(f"{r.claim_id}: {r.status}", err=True)
    if bad:
        click.echo(f"violated: {', '.join(bad)}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
