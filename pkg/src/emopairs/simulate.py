"""Synthetic annotated corpora with a planted logistic model over pairs.

Randomness comes from SplitMix64 (Steele, Lea & Flood's 64-bit generator):
integer state, golden-gamma increment, two xor-multiply mixing rounds.
Doubles are derived as (u64 >> 11) * 2^-53, so a fixed seed reproduces the
same corpus on any platform or implementation language.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .annotation import AnnotatedPost, DepressionLabel, SentenceEmotion, binarize_depression
from .corpus import RawPost
from .emotions import EMOTION_INDEX, is_emotion
from .pairfeat import Pair

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Portable 64-bit generator; the fixture and acceptance RNG."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform in [0, 1) with 53 significant bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def bernoulli(self, p: float) -> bool:
        return self.next_double() < p


@dataclass
class PlantedModel:
    """Ground-truth logistic model over pair features.

    ``coefficients[0]`` is the intercept; ``coefficients[j + 1]`` belongs
    to ``vocabulary[j]``. Emotion sets are sampled by independent
    inclusion draws (canonical emotion order), rejected until the
    distinct count falls inside ``distinct_range``.
    """

    vocabulary: list[Pair]
    coefficients: list[float]
    inclusion: dict[str, float]
    distinct_range: tuple[int, int] = (1, 10)
    seed: int = 1

    def __post_init__(self):
        if len(self.coefficients) != len(self.vocabulary) + 1:
            raise ValueError("need exactly one coefficient per pair plus the intercept")
        for emotion, p in self.inclusion.items():
            if not is_emotion(emotion):
                raise ValueError(f"unknown emotion {emotion!r}")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"inclusion probability for {emotion} outside [0,1]")
        for a, b in self.vocabulary:
            if self.inclusion.get(a, 0.0) <= 0.0 or self.inclusion.get(b, 0.0) <= 0.0:
                raise ValueError(f"pair ({a}, {b}) is not generatable under the sampler")
        lo, hi = self.distinct_range
        if not 0 <= lo <= hi:
            raise ValueError(f"invalid distinct_range {self.distinct_range}")

    @property
    def emotions(self) -> list[str]:
        return sorted(self.inclusion, key=EMOTION_INDEX.get)

    def to_json(self) -> dict:
        return {
            "vocabulary": [list(pair) for pair in self.vocabulary],
            "coefficients": self.coefficients,
            "inclusion": self.inclusion,
            "distinct_range": list(self.distinct_range),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PlantedModel":
        return cls(
            vocabulary=[tuple(pair) for pair in data["vocabulary"]],
            coefficients=list(data["coefficients"]),
            inclusion=dict(data["inclusion"]),
            distinct_range=tuple(data["distinct_range"]),
            seed=int(data["seed"]),
        )


def _sample_emotion_set(model: PlantedModel, rng: SplitMix64) -> list[str]:
    lo, hi = model.distinct_range
    emotions = model.emotions
    for _ in range(100_000):
        chosen = [e for e in emotions if rng.bernoulli(model.inclusion[e])]
        if lo <= len(chosen) <= hi:
            return chosen
    raise RuntimeError("emotion-set sampler rejected 100000 draws; check distinct_range")


def generate_corpus(
    model: PlantedModel,
    n_posts: int,
    *,
    policy: str = "moderate_or_severe",
) -> list[AnnotatedPost]:
    """Deterministically generate annotated posts from the planted model.

    One sentence per sampled emotion (text equals the emotion name, so
    the identity lexicon round-trips); the outcome is Bernoulli at the
    planted linear predictor.
    """
    if n_posts < 1:
        raise ValueError("n_posts must be >= 1")
    rng = SplitMix64(model.seed)
    posts = []
    for i in range(n_posts):
        chosen = _sample_emotion_set(model, rng)
        present = set(chosen)
        eta = model.coefficients[0]
        for j, (a, b) in enumerate(model.vocabulary):
            if a in present and b in present:
                eta += model.coefficients[j + 1]
        outcome = 1 if rng.bernoulli(1.0 / (1.0 + math.exp(-eta))) else 0
        label = "moderate" if outcome else "not_depressed"
        depression = DepressionLabel(label, 1.0)
        posts.append(
            AnnotatedPost(
                post_id=f"sim-{i:06d}",
                sentence_emotions=[
                    SentenceEmotion(index=k, emotion=e, score=1.0) for k, e in enumerate(chosen)
                ],
                depression=depression,
                outcome=binarize_depression(depression, policy),
            )
        )
    return posts


def raw_posts_from_annotated(annotated: list[AnnotatedPost], *, epoch_start: int = 1_600_000_000) -> list[RawPost]:
    """Raw-post mirror of a synthetic corpus (one terminated sentence per label).

    Feeding these through segmentation and the identity lexicon
    reproduces the original labels.
    """
    return [
        RawPost(
            id=post.post_id,
            created_utc=epoch_start + i,
            title="",
            body=" ".join(f"{se.emotion}." for se in post.sentence_emotions),
            source="synthetic",
        )
        for i, post in enumerate(annotated)
    ]


def identity_lexicon(model: PlantedModel) -> list[tuple[str, str]]:
    """Lexicon rules mapping each sampler emotion name to itself.

    Longer names first: "approval" is a substring of "disapproval", and
    the lexicon is first-match-wins.
    """
    return [(e, e) for e in sorted(model.emotions, key=lambda e: (-len(e), EMOTION_INDEX[e]))]


def default_model(seed: int = 20_260_811) -> PlantedModel:
    """The bundled planted model: 12 vocabulary pairs over 8 main emotions
    (6 nonzero effects), plus low-rate background emotions so frequency and
    sentiment outputs are non-degenerate.
    """
    inclusion = {
        "amusement": 0.45,
        "anger": 0.45,
        "curiosity": 0.45,
        "grief": 0.45,
        "joy": 0.45,
        "optimism": 0.45,
        "realization": 0.45,
        "sadness": 0.45,
        "admiration": 0.08,
        "annoyance": 0.20,
        "approval": 0.15,
        "caring": 0.15,
        "disappointment": 0.20,
        "disapproval": 0.12,
        "disgust": 0.07,
        "fear": 0.10,
        "nervousness": 0.08,
        "relief": 0.06,
        "surprise": 0.10,
        "neutral": 0.25,
    }
    vocabulary = [
        ("amusement", "grief"),
        ("anger", "sadness"),
        ("grief", "sadness"),
        ("optimism", "sadness"),
        ("curiosity", "joy"),
        ("amusement", "joy"),
        ("anger", "grief"),
        ("amusement", "optimism"),
        ("curiosity", "realization"),
        ("joy", "optimism"),
        ("realization", "sadness"),
        ("anger", "realization"),
    ]
    coefficients = [-0.4, 1.2, 0.85, 0.5, -0.45, -0.8, -1.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    return PlantedModel(
        vocabulary=vocabulary,
        coefficients=coefficients,
        inclusion=inclusion,
        distinct_range=(1, 10),
        seed=seed,
    )


def save_ground_truth(model: PlantedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_ground_truth(path) -> PlantedModel:
    with open(path, encoding="utf-8") as fh:
        return PlantedModel.from_json(json.load(fh))
