"""Matplotlib figure output: embedding scatters and experiment report figures.

Purely presentational; nothing here is covered by bit-exact guarantees.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .embed import Embedding  # noqa: E402
from .experiment import ExperimentReport  # noqa: E402
from .space import FiniteMetricSpace  # noqa: E402

# keep labels as real <text> elements in SVG output
plt.rcParams["svg.fonttype"] = "none"

_FIGSIZE = (8.0, 6.0)  # 800x600 at dpi 100


def save_embedding_plot(space: FiniteMetricSpace, emb: Embedding, path) -> Path:
    """Scatter of a dim<=2 embedding with one marker and one label per point."""
    if emb.target_dim not in (1, 2):
        raise ValueError("plots are only drawn for 1- or 2-dimensional embeddings")
    xs = [float(pt[0]) for pt in emb.points]
    ys = [float(pt[1]) if emb.target_dim == 2 else 0.0 for pt in emb.points]

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=100)
    ax.plot(xs, ys, "o", color="tab:blue", markersize=8)
    for label, x, y in zip(emb.labels, xs, ys):
        ax.annotate(label, (x, y), textcoords="offset points", xytext=(6, 6), fontsize=10)
    if emb.target_dim == 1:
        ax.axhline(0.0, color="0.8", linewidth=1, zorder=0)
        ax.set_yticks([])
    ax.set_title(f"embedding into R^{emb.target_dim} ({emb.status})")
    ax.margins(0.15)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def save_experiment_report(report: ExperimentReport, outdir) -> dict[str, Path]:
    """Write trials.csv plus summary figures into a directory."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    grid_keys = [f"N={N},M={M}" for N, M in report.grid]
    csv_path = outdir / "trials.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "injective_before", "injective_after", *grid_keys])
        for row in report.trial_details:
            writer.writerow([row["trial"], int(row["injective_before"]),
                             int(row["injective_after"]),
                             *[int(row[k]) for k in grid_keys]])
    paths["trials_csv"] = csv_path

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=100)
    rates = [report.mnm_hits[k] / report.trials for k in grid_keys]
    ax.bar(range(len(grid_keys)), rates, color="tab:green")
    ax.set_xticks(range(len(grid_keys)))
    ax.set_xticklabels(grid_keys, rotation=30, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("witness hit rate")
    ax.set_title(f"partition witnesses over {report.trials} trials "
                 f"({report.points} points, eps={report.eps})")
    fig.tight_layout()
    hits_path = outdir / "mnm_hits.png"
    fig.savefig(hits_path)
    plt.close(fig)
    paths["mnm_hits"] = hits_path

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=100)
    ax.bar([0, 1],
           [report.injective_before_perturbation / report.trials,
            report.injective_after_perturbation / report.trials],
           color=["tab:orange", "tab:blue"])
    ax.set_xticks([0, 1])
    ax.set_xticklabels(["before perturbation", "after perturbation"])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("fraction injective")
    ax.set_title("injective-distance rate")
    fig.tight_layout()
    inj_path = outdir / "injectivity.png"
    fig.savefig(inj_path)
    plt.close(fig)
    paths["injectivity"] = inj_path

    return paths
