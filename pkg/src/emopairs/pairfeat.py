"""Emotion-pair features: vocabulary building and the sparse design matrix.

A pair feature is a binary indicator that both emotions of an unordered
pair occur in a post's distinct emotion set. The optional ordered mode
(sensitivity analysis) doubles the vocabulary: feature (a, b) fires only
when a's first sentence occurrence precedes b's.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .annotation import AnnotatedPost
from .emotions import EMOTION_INDEX, canonical_pair, pair_sort_key
from .errors import EmptyVocabularyError

Pair = tuple[str, str]


@dataclass
class PairVocabulary:
    """Deterministically ordered pair features with their post support."""

    pairs: list[Pair]
    support: list[int]
    min_support: int
    ordered: bool = False

    def __post_init__(self):
        self.index = {pair: j for j, pair in enumerate(self.pairs)}

    def __len__(self) -> int:
        return len(self.pairs)

    def names(self) -> list[str]:
        return [f"{a}-{b}" for a, b in self.pairs]


@dataclass
class DesignMatrix:
    """Sparse binary posts x pair-features matrix with the outcome vector.

    ``rows[i]`` holds the sorted active column indices of post i; the
    intercept column is implicit.
    """

    rows: list[list[int]]
    n_features: int
    y: np.ndarray
    post_ids: list[str]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def to_dense(self, *, intercept: bool = True) -> np.ndarray:
        """Dense float design, optionally with a leading column of ones."""
        offset = 1 if intercept else 0
        X = np.zeros((len(self.rows), self.n_features + offset))
        if intercept:
            X[:, 0] = 1.0
        for i, cols in enumerate(self.rows):
            for j in cols:
                X[i, j + offset] = 1.0
        return X

    @classmethod
    def from_dense(cls, features: np.ndarray, y, post_ids=None) -> "DesignMatrix":
        """Build from a dense 0/1 feature array (no intercept column)."""
        features = np.asarray(features)
        rows = [sorted(np.nonzero(features[i])[0].tolist()) for i in range(features.shape[0])]
        ids = list(post_ids) if post_ids is not None else [f"row-{i}" for i in range(len(rows))]
        return cls(rows=rows, n_features=features.shape[1], y=np.asarray(y, dtype=np.int8), post_ids=ids)


def extract_pairs(post: AnnotatedPost, *, include_neutral: bool = False) -> set[Pair]:
    """All 2-subsets of the post's distinct emotion set, canonically ordered."""
    emotions = sorted(post.emotion_set(include_neutral=include_neutral), key=EMOTION_INDEX.get)
    return set(combinations(emotions, 2))


def extract_ordered_pairs(post: AnnotatedPost, *, include_neutral: bool = False) -> set[Pair]:
    """Directed variant: (a, b) iff both present and a first occurs before b."""
    first_seen: dict[str, int] = {}
    for se in sorted(post.sentence_emotions, key=lambda se: se.index):
        if not include_neutral and se.emotion == "neutral":
            continue
        first_seen.setdefault(se.emotion, se.index)
    pairs = set()
    for a, b in combinations(sorted(first_seen, key=EMOTION_INDEX.get), 2):
        if first_seen[a] <= first_seen[b]:
            pairs.add((a, b))
        else:
            pairs.add((b, a))
    return pairs


def _post_pairs(post: AnnotatedPost, include_neutral: bool, ordered: bool) -> set[Pair]:
    if ordered:
        return extract_ordered_pairs(post, include_neutral=include_neutral)
    return extract_pairs(post, include_neutral=include_neutral)


def build_vocabulary(
    annotated: list[AnnotatedPost],
    min_support: int,
    *,
    include_neutral: bool = False,
    ordered: bool = False,
) -> PairVocabulary:
    """Pairs whose post support meets the threshold, support-descending.

    Ties are broken by canonical pair order so the column layout is
    reproducible.
    """
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    support: dict[Pair, int] = {}
    for post in annotated:
        for pair in _post_pairs(post, include_neutral, ordered):
            support[pair] = support.get(pair, 0) + 1
    kept = sorted(
        ((pair, n) for pair, n in support.items() if n >= min_support),
        key=lambda item: (-item[1], pair_sort_key(item[0])),
    )
    if not kept:
        raise EmptyVocabularyError(
            f"no pair reaches min_support={min_support} over {len(annotated)} posts"
        )
    return PairVocabulary(
        pairs=[pair for pair, _ in kept],
        support=[n for _, n in kept],
        min_support=min_support,
        ordered=ordered,
    )


def default_min_support(post_count: int) -> int:
    """max(25, 0.1% of posts): keeps quasi-separated columns out of the fit."""
    return max(25, math.ceil(post_count / 1000))


def build_design_matrix(
    annotated: list[AnnotatedPost],
    vocabulary: PairVocabulary,
    *,
    include_neutral: bool = False,
) -> DesignMatrix:
    """Binary presence encoding, rows in corpus order.

    Rows whose pairs are all out-of-vocabulary stay in the matrix as
    intercept-only rows.
    """
    if len(vocabulary) == 0:
        raise EmptyVocabularyError("vocabulary is empty")
    rows = []
    for post in annotated:
        active = sorted(
            vocabulary.index[pair]
            for pair in _post_pairs(post, include_neutral, vocabulary.ordered)
            if pair in vocabulary.index
        )
        rows.append(active)
    y = np.array([post.outcome for post in annotated], dtype=np.int8)
    return DesignMatrix(
        rows=rows,
        n_features=len(vocabulary),
        y=y,
        post_ids=[post.post_id for post in annotated],
    )


def pair_from_name(name: str) -> Pair:
    a, _, b = name.partition("-")
    return canonical_pair(a, b)


def export_design(matrix: DesignMatrix, vocabulary: PairVocabulary, prefix) -> list[str]:
    """Sparse triplet CSV plus vocabulary and outcome sidecars.

    Returns the written paths: ``<prefix>_matrix.csv``, ``<prefix>_vocab.csv``
    and ``<prefix>_outcome.csv``.
    """
    matrix_path = f"{prefix}_matrix.csv"
    vocab_path = f"{prefix}_vocab.csv"
    outcome_path = f"{prefix}_outcome.csv"
    with open(matrix_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "value"])
        for i, cols in enumerate(matrix.rows):
            for j in cols:
                writer.writerow([i, j, 1])
    with open(vocab_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["col", "emotion_a", "emotion_b", "support"])
        for j, ((a, b), n) in enumerate(zip(vocabulary.pairs, vocabulary.support)):
            writer.writerow([j, a, b, n])
    with open(outcome_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "y"])
        for i, value in enumerate(matrix.y):
            writer.writerow([i, int(value)])
    return [matrix_path, vocab_path, outcome_path]
