"""Post-level emotion co-occurrence: matrix, network, and exports.

Two emotions co-occur when both appear in the distinct emotion set of one
post; a post contributes at most 1 to any pair. Neutral is excluded by
default (it is a catch-all, not an emotion). The sentence-multiset
alternative (pair weight = min of the two per-post occurrence counts) sits
behind ``count_mode="multiset"``.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from xml.etree import ElementTree as ET

import numpy as np

from .annotation import AnnotatedPost
from .emotions import EMOTION_INDEX, EMOTIONS, sentiment_grouped_order, sentiment_of

COUNT_MODES = ("distinct", "multiset")

EXPORT_FORMATS = ("graphml", "dot", "edge_csv")


@dataclass
class CooccurrenceMatrix:
    """28x28 symmetric pair counts in canonical emotion order; zero diagonal."""

    counts: np.ndarray
    post_count: int

    def value(self, a: str, b: str) -> int:
        return int(self.counts[EMOTION_INDEX[a], EMOTION_INDEX[b]])


@dataclass(frozen=True)
class NodeStats:
    emotion: str
    occurrence_count: int
    post_presence: int


@dataclass
class EmotionNetwork:
    nodes: list[NodeStats]
    edges: list[tuple[str, str, int]]

    def weighted_degree(self, emotion: str) -> int:
        return sum(w for a, b, w in self.edges if emotion in (a, b))


def build_cooccurrence(
    annotated: list[AnnotatedPost],
    *,
    include_neutral: bool = False,
    count_mode: str = "distinct",
) -> CooccurrenceMatrix:
    """Accumulate the symmetric post-level co-occurrence matrix."""
    if count_mode not in COUNT_MODES:
        raise ValueError(f"unknown count_mode {count_mode!r}")
    counts = np.zeros((len(EMOTIONS), len(EMOTIONS)), dtype=np.int64)
    for post in annotated:
        if count_mode == "distinct":
            present = sorted(EMOTION_INDEX[e] for e in post.emotion_set(include_neutral=include_neutral))
            for i, j in combinations(present, 2):
                counts[i, j] += 1
                counts[j, i] += 1
        else:
            multiset = Counter(se.emotion for se in post.sentence_emotions)
            if not include_neutral:
                multiset.pop("neutral", None)
            present = sorted(EMOTION_INDEX[e] for e in multiset)
            by_index = {EMOTION_INDEX[e]: n for e, n in multiset.items()}
            for i, j in combinations(present, 2):
                weight = min(by_index[i], by_index[j])
                counts[i, j] += weight
                counts[j, i] += weight
    return CooccurrenceMatrix(counts=counts, post_count=len(annotated))


def compute_node_stats(
    annotated: list[AnnotatedPost],
    *,
    include_neutral: bool = False,
) -> list[NodeStats]:
    """Per-emotion sentence occurrences and post presences, canonical order."""
    occurrences: Counter[str] = Counter()
    presences: Counter[str] = Counter()
    for post in annotated:
        for se in post.sentence_emotions:
            occurrences[se.emotion] += 1
        presences.update(post.emotion_set(include_neutral=True))
    stats = []
    for emotion in EMOTIONS:
        if emotion == "neutral" and not include_neutral:
            continue
        stats.append(
            NodeStats(
                emotion=emotion,
                occurrence_count=occurrences.get(emotion, 0),
                post_presence=presences.get(emotion, 0),
            )
        )
    return stats


def matrix_to_network(matrix: CooccurrenceMatrix, node_stats: list[NodeStats]) -> EmotionNetwork:
    """Nonzero upper-triangle entries become edges; silent emotions drop out."""
    edges = []
    incident: set[str] = set()
    n = len(EMOTIONS)
    for i in range(n):
        for j in range(i + 1, n):
            weight = int(matrix.counts[i, j])
            if weight > 0:
                a, b = EMOTIONS[i], EMOTIONS[j]
                edges.append((a, b, weight))
                incident.add(a)
                incident.add(b)
    nodes = [s for s in node_stats if s.occurrence_count > 0 or s.emotion in incident]
    return EmotionNetwork(nodes=nodes, edges=edges)


def export_network(network: EmotionNetwork, fmt: str, destination) -> None:
    """Write the network as GraphML, DOT, or an edge-list CSV.

    Element order is canonical, so repeated exports are byte-identical.
    """
    if fmt == "graphml":
        payload = _to_graphml(network)
    elif fmt == "dot":
        payload = _to_dot(network)
    elif fmt == "edge_csv":
        payload = _to_edge_csv(network)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(payload)


_GRAPHML_KEYS = (
    ("occurrence_count", "node", "int"),
    ("post_presence", "node", "int"),
    ("sentiment", "node", "string"),
    ("weight", "edge", "int"),
)


def _to_graphml(network: EmotionNetwork) -> str:
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    for name, domain, attr_type in _GRAPHML_KEYS:
        ET.SubElement(
            root,
            "key",
            {"id": name, "for": domain, "attr.name": name, "attr.type": attr_type},
        )
    graph = ET.SubElement(root, "graph", {"id": "emotions", "edgedefault": "undirected"})
    for stats in network.nodes:
        node = ET.SubElement(graph, "node", {"id": stats.emotion})
        for key, value in (
            ("occurrence_count", stats.occurrence_count),
            ("post_presence", stats.post_presence),
            ("sentiment", sentiment_of(stats.emotion)),
        ):
            data = ET.SubElement(node, "data", {"key": key})
            data.text = str(value)
        node.tail = "\n  "
    for a, b, weight in network.edges:
        edge = ET.SubElement(graph, "edge", {"source": a, "target": b})
        data = ET.SubElement(edge, "data", {"key": "weight"})
        data.text = str(weight)
        edge.tail = "\n  "
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def _to_dot(network: EmotionNetwork) -> str:
    lines = ["graph emotions {"]
    for stats in network.nodes:
        lines.append(
            f'  "{stats.emotion}" [occurrence_count={stats.occurrence_count},'
            f' post_presence={stats.post_presence},'
            f' sentiment="{sentiment_of(stats.emotion)}"];'
        )
    for a, b, weight in network.edges:
        lines.append(f'  "{a}" -- "{b}" [weight={weight}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_edge_csv(network: EmotionNetwork) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for a, b, weight in network.edges:
        writer.writerow([a, b, weight])
    return buffer.getvalue()


def export_matrix(matrix: CooccurrenceMatrix, destination, *, order: str = "canonical") -> None:
    """Matrix CSV with emotion names as header row and column.

    ``order="sentiment"`` groups rows/columns as negative block, positive
    block, neutral block (canonical order within each block).
    """
    if order == "canonical":
        labels = list(EMOTIONS)
    elif order == "sentiment":
        labels = sentiment_grouped_order()
    else:
        raise ValueError(f"unknown matrix order {order!r}")
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["emotion"] + labels)
        for row_label in labels:
            i = EMOTION_INDEX[row_label]
            writer.writerow(
                [row_label] + [int(matrix.counts[i, EMOTION_INDEX[c]]) for c in labels]
            )
