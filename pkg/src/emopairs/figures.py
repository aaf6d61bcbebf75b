"""Render report figures to files.

The analysis modules stay plot-free; this module turns their outputs into
PNGs next to the delimited artifacts. PNG metadata is scrubbed and the
network layout seeded, so re-renders of the same inputs are byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx
import numpy as np

from .cooccurrence import CooccurrenceMatrix, EmotionNetwork
from .diststats import DistributionSummary, PairCountHistogram
from .emotions import EMOTION_INDEX, sentiment_grouped_order, sentiment_of

GROUP_COLORS = {"negative": "#2166ac", "positive": "#1b7837", "neutral": "#762a83"}

_SAVE_KWARGS = {"dpi": 150, "metadata": {"Software": None}}


def plot_cdf_ccdf(summary: DistributionSummary, destination) -> None:
    """Rank-ordered cumulative and complementary-cumulative shares."""
    ranks = np.arange(1, len(summary.ranked) + 1)
    labels = [emotion for emotion, _, _ in summary.ranked]
    fig, ax = plt.subplots(figsize=(9, 5))
    ax.plot(ranks, summary.cdf, marker="o", label="CDF")
    ax.plot(ranks, summary.ccdf, marker="s", label="CCDF")
    ax.axhline(0.5, color="gray", linestyle=":", linewidth=1)
    ax.set_xticks(ranks)
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("cumulative share")
    ax.set_xlabel("emotion rank")
    ax.set_title("Emotion frequency: CDF and CCDF")
    ax.legend()
    fig.tight_layout()
    fig.savefig(destination, **_SAVE_KWARGS)
    plt.close(fig)


def plot_pair_histogram(histogram: PairCountHistogram, destination) -> None:
    """Posts by number of emotion pairs."""
    pairs = list(histogram.by_pairs)
    posts = [histogram.by_pairs[p] for p in pairs]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.bar([str(p) for p in pairs], posts, color="#4477aa")
    ax.set_xlabel("pairs per post")
    ax.set_ylabel("posts")
    ax.set_title("Distribution of emotion pairs per post")
    fig.tight_layout()
    fig.savefig(destination, **_SAVE_KWARGS)
    plt.close(fig)


def plot_network(network: EmotionNetwork, destination, *, layout_seed: int = 7) -> None:
    """Co-occurrence network: node size by occurrences, edge width by weight."""
    graph = nx.Graph()
    for stats in network.nodes:
        graph.add_node(stats.emotion, occurrence=stats.occurrence_count)
    for a, b, weight in network.edges:
        graph.add_edge(a, b, weight=weight)
    fig, ax = plt.subplots(figsize=(9, 9))
    if graph.number_of_nodes():
        pos = nx.spring_layout(graph, seed=layout_seed, weight="weight")
        occurrences = np.array([graph.nodes[n]["occurrence"] for n in graph.nodes], dtype=float)
        scale = occurrences.max() if occurrences.max() > 0 else 1.0
        sizes = 300 + 1700 * occurrences / scale
        colors = [GROUP_COLORS[sentiment_of(n)] for n in graph.nodes]
        weights = np.array([graph.edges[e]["weight"] for e in graph.edges], dtype=float)
        widths = 0.5 + 4.5 * weights / weights.max() if len(weights) else []
        nx.draw_networkx_edges(graph, pos, ax=ax, width=widths, edge_color="#999999", alpha=0.7)
        nx.draw_networkx_nodes(graph, pos, ax=ax, node_size=sizes, node_color=colors, alpha=0.9)
        nx.draw_networkx_labels(graph, pos, ax=ax, font_size=8)
    ax.set_title("Emotion co-occurrence network")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(destination, **_SAVE_KWARGS)
    plt.close(fig)


def plot_cooccurrence_heatmap(matrix: CooccurrenceMatrix, destination) -> None:
    """Sentiment-grouped heatmap; tick labels colored by group."""
    labels = sentiment_grouped_order()
    order = [EMOTION_INDEX[e] for e in labels]
    grid = matrix.counts[np.ix_(order, order)]
    fig, ax = plt.subplots(figsize=(10, 9))
    image = ax.imshow(grid, cmap="viridis")
    ax.set_xticks(range(len(labels)))
    ax.set_yticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_yticklabels(labels, fontsize=7)
    for tick, emotion in zip(ax.get_xticklabels(), labels):
        tick.set_color(GROUP_COLORS[sentiment_of(emotion)])
    for tick, emotion in zip(ax.get_yticklabels(), labels):
        tick.set_color(GROUP_COLORS[sentiment_of(emotion)])
    fig.colorbar(image, ax=ax, shrink=0.8, label="co-occurring posts")
    ax.set_title("Emotion co-occurrence matrix (sentiment-grouped)")
    fig.tight_layout()
    fig.savefig(destination, **_SAVE_KWARGS)
    plt.close(fig)
