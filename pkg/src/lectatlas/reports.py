"""Delimited corpus summaries and companion chart rendering."""

from __future__ import annotations

from pathlib import Path

from .corpus import CorpusStats


def stats_table(stats: CorpusStats) -> str:
    """Tab-delimited summary: topic tallies (descending) then corpus totals."""
    lines = ["topic\tcount"]
    ordered = sorted(stats.topic_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    lines += [f"{topic}\t{count}" for topic, count in ordered]
    lines.append("")
    lines.append(f"n_sources\t{stats.n_sources}")
    lines.append(f"n_lects\t{stats.n_lects}")
    lines.append(f"n_locations\t{stats.n_locations}")
    return "\n".join(lines) + "\n"


def render_topic_chart(stats: CorpusStats, path: str | Path) -> None:
    """Horizontal bar chart of per-topic source counts, written to a file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ordered = sorted(stats.topic_counts.items(), key=lambda kv: (kv[1], kv[0]))
    topics = [t for t, _ in ordered]
    counts = [c for _, c in ordered]
    fig, ax = plt.subplots(figsize=(7, max(2.0, 0.4 * len(topics) + 1.2)))
    ax.barh(range(len(topics)), counts, color="#1f78b4")
    ax.set_yticks(range(len(topics)))
    ax.set_yticklabels(topics)
    ax.set_xlabel("sources")
    ax.set_title(f"Topic coverage ({stats.n_sources} sources, {stats.n_lects} lects)")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
