"""Selftest reports: a TSV table and a bar chart of outcome counts per suite."""

from __future__ import annotations

import csv
from pathlib import Path

COLUMNS = ("criterion", "suite", "pass", "unknown", "fail", "total", "threshold", "ok", "seconds")


def rows(results) -> list:
    return [
        {
            "criterion": r.criterion,
            "suite": r.name,
            "pass": r.passed,
            "unknown": r.unknown,
            "fail": r.failed,
            "total": r.total,
            "threshold": r.threshold,
            "ok": "PASS" if r.ok else "FAIL",
            "seconds": f"{r.elapsed:.2f}",
        }
        for r in results
    ]


def write_tsv(results, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, delimiter="\t", lineterminator="\n")
        w.writeheader()
        w.writerows(rows(results))
    return path


def plot_counts(results, path) -> Path:
    """Grouped bars of pass/unknown/fail per suite on a log axis (counts span 14 to 12000)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    labels = [f"{r.criterion}. {r.name}" for r in results]
    series = (("pass", "#4c9a2a", "passed"), ("unknown", "#e0a526", "unknown"), ("fail", "#c0392b", "failed"))
    width = 0.27
    fig, ax = plt.subplots(figsize=(11, 5.5))
    for i, (label, color, attr) in enumerate(series):
        xs = [j + (i - 1) * width for j in range(len(results))]
        vals = [getattr(r, attr) for r in results]
        bars = ax.bar(xs, [v if v > 0 else 0 for v in vals], width, label=label, color=color)
        for b, v in zip(bars, vals):
            if v > 0:
                ax.annotate(str(v), (b.get_x() + b.get_width() / 2, v), ha="center", va="bottom", fontsize=7)
    ax.set_yscale("log")
    ax.set_ylim(0.8, max(r.total for r in results) * 3)
    ax.set_xticks(range(len(results)))
    ax.set_xticklabels(labels, rotation=35, ha="right", fontsize=8)
    ax.set_ylabel("instances")
    ax.set_title("selftest outcomes per suite")
    for j, r in enumerate(results):
        if not r.ok:
            ax.get_xticklabels()[j].set_color("#c0392b")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(results, directory) -> tuple:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    return write_tsv(results, d / "results.tsv"), plot_counts(results, d / "counts.png")
