"""Render the report data series as PNG figures.

Uses the Agg backend and fixed style parameters so repeated runs over the
same inputs produce byte-identical images.
"""

from __future__ import annotations

from datetime import date
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (8.0, 4.5),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.titlesize": 11,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
}

_SAVEFIG_KWARGS = {"metadata": {"Software": None}}  # strip version banner for stable bytes


def _new_axes(title: str):
    plt.rcParams.update(STYLE)
    fig, ax = plt.subplots()
    ax.set_title(title)
    ax.xaxis.set_major_formatter(mdates.DateFormatter("%Y-%m"))
    fig.autofmt_xdate()
    return fig, ax


def plot_vocab_timeseries(
    vocab_id: str,
    series: list[tuple[date, int]],
    version_dates: list[date],
    out_path: str | Path,
) -> Path:
    """One vocabulary's triple counts over snapshots, with dashed red
    markers at each version publication date."""
    fig, ax = _new_axes(f"Triples using {vocab_id} terms per snapshot")
    if series:
        ax.plot([d for d, _ in series], [c for _, c in series], marker="o", markersize=3)
    for when in version_dates:
        ax.axvline(when, color="red", linestyle="--", linewidth=0.9, alpha=0.8)
    ax.set_xlabel("snapshot date")
    ax.set_ylabel("triples")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, **_SAVEFIG_KWARGS)
    plt.close(fig)
    return out_path


def plot_all_timeseries(
    per_vocab: dict[str, list[tuple[date, int]]], out_path: str | Path
) -> Path:
    """All vocabularies on one chart (log-scaled when the spread is wide)."""
    fig, ax = _new_axes("Triples using tracked vocabulary terms per snapshot")
    peak = 0
    for vocab_id in sorted(per_vocab):
        series = per_vocab[vocab_id]
        if not series:
            continue
        peak = max(peak, max(c for _, c in series))
        ax.plot(
            [d for d, _ in series],
            [c for _, c in series],
            label=vocab_id,
            linewidth=1.2,
        )
    if peak > 10_000:
        ax.set_yscale("symlog")
    ax.set_xlabel("snapshot date")
    ax.set_ylabel("triples")
    if per_vocab:
        ax.legend(ncol=2)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, **_SAVEFIG_KWARGS)
    plt.close(fig)
    return out_path


def plot_adoption_lags(
    vocab_id: str, lags: list[tuple[str, int]], out_path: str | Path
) -> Path:
    """Horizontal bars of adoption lag (days) per newly created term."""
    plt.rcParams.update(STYLE)
    height = max(2.5, 0.28 * len(lags) + 1.2)
    fig, ax = plt.subplots(figsize=(8.0, height))
    ax.set_title(f"Adoption lag of new {vocab_id} terms")
    if lags:
        names = [name for name, _ in lags]
        values = [value for _, value in lags]
        ax.barh(range(len(lags)), values, color="#3572b0")
        ax.set_yticks(range(len(lags)))
        ax.set_yticklabels(names, fontsize=7)
        ax.invert_yaxis()
    ax.set_xlabel("days from publication to first observed use")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, **_SAVEFIG_KWARGS)
    plt.close(fig)
    return out_path
