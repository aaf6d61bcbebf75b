from emopairs.cooccurrence import build_cooccurrence, compute_node_stats, matrix_to_network
from emopairs.diststats import emotion_frequency, pair_count_histogram
from emopairs.figures import (
    plot_cdf_ccdf,
    plot_cooccurrence_heatmap,
    plot_network,
    plot_pair_histogram,
)

from conftest import random_corpus

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_all_figures_render_and_rerender_identically(tmp_path):
    posts = random_corpus(42, max_posts=80)
    summary = emotion_frequency(posts)
    histogram = pair_count_histogram(posts)
    matrix = build_cooccurrence(posts)
    network = matrix_to_network(matrix, compute_node_stats(posts))

    renders = {
        "cdf.png": lambda p: plot_cdf_ccdf(summary, p),
        "hist.png": lambda p: plot_pair_histogram(histogram, p),
        "net.png": lambda p: plot_network(network, p),
        "heat.png": lambda p: plot_cooccurrence_heatmap(matrix, p),
    }
    for name, render in renders.items():
        first, second = tmp_path / f"a_{name}", tmp_path / f"b_{name}"
        render(first)
        render(second)
        data = first.read_bytes()
        assert data[:8] == PNG_MAGIC
        assert len(data) > 1000
        assert data == second.read_bytes()


def test_empty_network_renders(tmp_path):
    from emopairs.cooccurrence import EmotionNetwork

    path = tmp_path / "empty.png"
    plot_network(EmotionNetwork(nodes=[], edges=[]), path)
    assert path.read_bytes()[:8] == PNG_MAGIC
