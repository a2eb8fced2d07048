"""Render report figures next to the delimited outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# Dropping the Software tag keeps PNG output byte-identical across runs.
_METADATA = {"Software": None}


def save_sweep_figure(points, path) -> None:
    """Precision/recall over similarity thresholds."""
    thresholds = [p.threshold for p in points]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(thresholds, [p.precision for p in points], marker="o", label="precision")
    ax.plot(thresholds, [p.recall for p in points], marker="s", label="recall")
    ax.set_xlabel("similarity threshold (%)")
    ax.set_ylabel("score")
    ax.set_ylim(0, 1.05)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)


def save_category_figure(rows, path) -> None:
    """Confirmed vs useful pair counts per category (totals row excluded)."""
    data = [r for r in rows if r.category != "overall" and r.total > 0]
    labels = [r.category for r in data]
    x = range(len(data))
    width = 0.4
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([i - width / 2 for i in x], [r.total for r in data], width, label="confirmed")
    ax.bar([i + width / 2 for i in x], [r.useful for r in data], width, label="useful")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("pairs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)


def save_evaluation_figure(report, path) -> None:
    """Precision/recall bars per tag."""
    rows = list(report.rows)
    labels = [r.tag for r in rows]
    x = range(len(rows))
    width = 0.4
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - width / 2 for i in x], [r.precision for r in rows], width, label="precision")
    ax.bar([i + width / 2 for i in x], [r.recall for r in rows], width, label="recall")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)
