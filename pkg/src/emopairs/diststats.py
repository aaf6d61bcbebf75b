"""Emotion frequency ranking with CDF/CCDF and the pairs-per-post histogram."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass

from .annotation import AnnotatedPost
from .emotions import EMOTION_INDEX
from .errors import BoundsError, EmptyDistributionError

FREQUENCY_UNITS = ("sentence", "post_presence")


@dataclass
class DistributionSummary:
    """Ranked (emotion, count, share) rows plus cumulative shares.

    Ranking is count-descending with ties broken by canonical label
    order; ccdf[k] is defined as 1 - cdf[k] at the same rank.
    """

    ranked: list[tuple[str, int, float]]
    cdf: list[float]
    ccdf: list[float]
    total: int


@dataclass
class PairCountHistogram:
    by_pairs: dict[int, int]
    by_distinct: dict[int, int]
    post_count: int


def emotion_frequency(
    annotated: list[AnnotatedPost],
    *,
    unit: str = "sentence",
    include_neutral: bool = False,
) -> DistributionSummary:
    """Rank emotions by frequency under the chosen counting unit.

    ``sentence`` counts every labeled sentence; ``post_presence`` counts
    an emotion once per post it appears in.
    """
    if unit not in FREQUENCY_UNITS:
        raise ValueError(f"unknown frequency unit {unit!r}")
    counts: Counter[str] = Counter()
    for post in annotated:
        if unit == "sentence":
            for se in post.sentence_emotions:
                if include_neutral or se.emotion != "neutral":
                    counts[se.emotion] += 1
        else:
            counts.update(post.emotion_set(include_neutral=include_neutral))
    total = sum(counts.values())
    if total == 0:
        raise EmptyDistributionError("no labeled sentences under the active policy")
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], EMOTION_INDEX[kv[0]]))
    shares = [count / total for _, count in ordered]
    # compensated prefix sums keep the terminal CDF value at 1 +/- 1e-12
    cdf = [math.fsum(shares[: k + 1]) for k in range(len(shares))]
    ccdf = [1.0 - value for value in cdf]
    ranked = [(emotion, count, share) for (emotion, count), share in zip(ordered, shares)]
    return DistributionSummary(ranked=ranked, cdf=cdf, ccdf=ccdf, total=total)


def top_k_share(summary: DistributionSummary, k: int) -> float:
    """Cumulative share of the k most frequent emotions."""
    if not 1 <= k <= len(summary.ranked):
        raise BoundsError(f"k={k} outside 1..{len(summary.ranked)}")
    return summary.cdf[k - 1]


def pair_count_histogram(
    annotated: list[AnnotatedPost],
    *,
    include_neutral: bool = False,
) -> PairCountHistogram:
    """Posts binned by distinct-emotion count k and by pair count C(k,2)."""
    by_pairs: Counter[int] = Counter()
    by_distinct: Counter[int] = Counter()
    for post in annotated:
        k = len(post.emotion_set(include_neutral=include_neutral))
        by_distinct[k] += 1
        by_pairs[k * (k - 1) // 2] += 1
    return PairCountHistogram(
        by_pairs=dict(sorted(by_pairs.items())),
        by_distinct=dict(sorted(by_distinct.items())),
        post_count=len(annotated),
    )


def write_frequency_tsv(summary: DistributionSummary, destination) -> None:
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["rank", "emotion", "count", "share", "cdf", "ccdf"])
        for rank, ((emotion, count, share), cdf, ccdf) in enumerate(
            zip(summary.ranked, summary.cdf, summary.ccdf), start=1
        ):
            writer.writerow([rank, emotion, count, f"{share:.12g}", f"{cdf:.12g}", f"{ccdf:.12g}"])


def write_histogram_tsv(histogram: PairCountHistogram, destination) -> None:
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(["pairs", "posts"])
        for pairs, posts in histogram.by_pairs.items():
            writer.writerow([pairs, posts])
