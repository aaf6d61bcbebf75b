"""The 28-category emotion taxonomy and its sentiment grouping.

Canonical order is the GoEmotions convention: the 27 emotions
alphabetically, then ``neutral`` last. Matrix indices, pair ordering and
tie-breaks all use this order.
"""

from __future__ import annotations

import csv
from importlib import resources

EMOTIONS: tuple[str, ...] = (
    "admiration",
    "amusement",
    "anger",
    "annoyance",
    "approval",
    "caring",
    "confusion",
    "curiosity",
    "desire",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "excitement",
    "fear",
    "gratitude",
    "grief",
    "joy",
    "love",
    "nervousness",
    "optimism",
    "pride",
    "realization",
    "relief",
    "remorse",
    "sadness",
    "surprise",
    "neutral",
)

EMOTION_INDEX: dict[str, int] = {name: i for i, name in enumerate(EMOTIONS)}

NEUTRAL = "neutral"

SENTIMENT_GROUPS = ("negative", "positive", "neutral")


def is_emotion(name: str) -> bool:
    return name in EMOTION_INDEX


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    """Order an unordered emotion pair by canonical index."""
    if a == b:
        raise ValueError(f"pair members must differ, got {a!r} twice")
    if EMOTION_INDEX[a] < EMOTION_INDEX[b]:
        return (a, b)
    return (b, a)


def pair_sort_key(pair: tuple[str, str]) -> tuple[int, int]:
    return (EMOTION_INDEX[pair[0]], EMOTION_INDEX[pair[1]])


def load_sentiment_groups(path=None) -> dict[str, str]:
    """Load the emotion -> sentiment-group mapping.

    The default mapping ships as an editable CSV (``emotion,group``).
    The mapping must be total over the 28 labels.
    """
    if path is None:
        source = resources.files(__package__).joinpath("data/sentiment_groups.csv")
        text = source.read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    mapping: dict[str, str] = {}
    for row in csv.reader(text.splitlines()):
        if not row or row[0].startswith("#") or row[0] == "emotion":
            continue
        emotion, group = row[0].strip(), row[1].strip()
        if not is_emotion(emotion):
            raise ValueError(f"unknown emotion in sentiment mapping: {emotion!r}")
        if group not in SENTIMENT_GROUPS:
            raise ValueError(f"unknown sentiment group: {group!r}")
        mapping[emotion] = group
    missing = [e for e in EMOTIONS if e not in mapping]
    if missing:
        raise ValueError(f"sentiment mapping is not total; missing {missing}")
    return mapping


_sentiment_cache: dict[str, str] | None = None


def sentiment_of(emotion: str) -> str:
    """Sentiment group of an emotion under the bundled default mapping."""
    global _sentiment_cache
    if _sentiment_cache is None:
        _sentiment_cache = load_sentiment_groups()
    return _sentiment_cache[emotion]


def sentiment_grouped_order(mapping: dict[str, str] | None = None) -> list[str]:
    """All 28 emotions as negative block, positive block, neutral block.

    Within a block the canonical order is kept. Matches the grouped
    matrix presentation.
    """
    if mapping is None:
        mapping = {e: sentiment_of(e) for e in EMOTIONS}
    ordered = []
    for group in ("negative", "positive", "neutral"):
        ordered.extend(e for e in EMOTIONS if mapping[e] == group)
    return ordered
