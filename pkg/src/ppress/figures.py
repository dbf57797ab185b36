"""Matplotlib rendering for benchmark and analysis reports.

Figures are a convenience view of the delimited records; the byte-exact
report contract lives in the text outputs, so nothing here participates in
golden-file comparisons.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_ratio_bars(rows, path: Path) -> None:
    """Grouped bars: compression ratio per corpus, one group per compressor."""
    corpora = sorted({r.corpus_id for r in rows})
    compressors = sorted({r.compressor_id for r in rows})
    if not corpora or not compressors:
        return
    width = 0.8 / len(compressors)
    fig, ax = plt.subplots(figsize=(max(6, 1.3 * len(corpora)), 4.2))
    for ci, comp in enumerate(compressors):
        xs, ys = [], []
        for xi, corpus in enumerate(corpora):
            match = [r for r in rows if r.corpus_id == corpus
                     and r.compressor_id == comp and r.lossless_verified]
            if match:
                xs.append(xi + ci * width)
                ys.append(match[0].ratio)
        ax.bar(xs, ys, width=width, label=comp)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(corpora))])
    ax.set_xticklabels(corpora, rotation=30, ha="right")
    ax.set_ylabel("compression ratio (original / compressed)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_ablation_lines(grid, axis_name: str, path: Path) -> None:
    """One line per corpus: ratio across the ablation axis values."""
    corpora = sorted({r.corpus_id for r in grid})
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for corpus in corpora:
        points = sorted(
            (r.axis_value, r.ratio)
            for r in grid
            if r.corpus_id == corpus and r.lossless_verified
        )
        if points:
            ax.plot([p[0] for p in points], [p[1] for p in points],
                    marker="o", label=corpus)
    ax.set_xlabel(axis_name)
    ax.set_ylabel("compression ratio")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
