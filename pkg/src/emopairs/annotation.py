"""Per-sentence emotion labels and per-post depression labels.

Backends are pluggable: a deterministic lexicon (tests, offline runs), a
remote HTTP service speaking the annotator protocol, or a pre-labeled
JSON-lines file. Every sentence gets exactly one top-1 emotion and every
post exactly one depression label; partially annotated corpora are never
emitted.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import httpx

from .corpus import RawPost, Sentence
from .emotions import NEUTRAL, is_emotion
from .errors import AnnotationBackendError, SchemaViolationError

DEPRESSION_LABELS = ("not_depressed", "moderate", "severe")

BINARIZE_POLICIES = ("moderate_or_severe", "severe_only")


@dataclass(frozen=True)
class SentenceEmotion:
    index: int
    emotion: str
    score: float


@dataclass(frozen=True)
class DepressionLabel:
    label: str
    score: float


@dataclass
class AnnotatedPost:
    post_id: str
    sentence_emotions: list[SentenceEmotion] = field(default_factory=list)
    depression: DepressionLabel = DepressionLabel("not_depressed", 1.0)
    outcome: int = 0

    def emotion_set(self, *, include_neutral: bool = False) -> set[str]:
        """Distinct emotions over the post's sentences."""
        emotions = {se.emotion for se in self.sentence_emotions}
        if not include_neutral:
            emotions.discard(NEUTRAL)
        return emotions


def binarize_depression(label: DepressionLabel | str, policy: str = "moderate_or_severe") -> int:
    """Collapse the three-level severity label to the binary outcome."""
    name = label.label if isinstance(label, DepressionLabel) else label
    if name not in DEPRESSION_LABELS:
        raise ValueError(f"unknown depression label {name!r}")
    if policy == "moderate_or_severe":
        return int(name in ("moderate", "severe"))
    if policy == "severe_only":
        return int(name == "severe")
    raise ValueError(f"unknown binarization policy {policy!r}")


def lexicon_annotate(text: str, rules: Sequence[tuple[str, str]]) -> str:
    """First rule whose keyword occurs case-insensitively wins; else neutral."""
    if not rules:
        raise ValueError("rules must be nonempty")
    lowered = text.lower()
    for keyword, emotion in rules:
        if keyword.lower() in lowered:
            return emotion
    return NEUTRAL


def load_lexicon_rules(path) -> list[tuple[str, str]]:
    """Load an ordered ``keyword,label`` CSV. Order is match priority."""
    rules = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "keyword":
                continue
            rules.append((row[0], row[1].strip()))
    return rules


class Annotator(Protocol):
    def emotions(self, texts: Sequence[str]) -> list[tuple[str, float]]: ...

    def depression(self, text: str) -> tuple[str, float]: ...


class LexiconAnnotator:
    """Deterministic keyword backend; a pure function of (text, rules)."""

    def __init__(
        self,
        rules: Sequence[tuple[str, str]],
        depression_rules: Sequence[tuple[str, str]] = (),
    ):
        if not rules:
            raise ValueError("lexicon rules must be nonempty")
        for _, emotion in rules:
            if not is_emotion(emotion):
                raise ValueError(f"unknown emotion in rules: {emotion!r}")
        for _, label in depression_rules:
            if label not in DEPRESSION_LABELS:
                raise ValueError(f"unknown depression label in rules: {label!r}")
        self.rules = list(rules)
        self.depression_rules = list(depression_rules)

    def emotions(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        return [(lexicon_annotate(t, self.rules), 1.0) for t in texts]

    def depression(self, text: str) -> tuple[str, float]:
        lowered = text.lower()
        for keyword, label in self.depression_rules:
            if keyword.lower() in lowered:
                return (label, 1.0)
        return ("not_depressed", 1.0)


class RemoteAnnotator:
    """Client for the annotator HTTP service.

    Batches sentence requests (64 per call), retries transient failures
    with exponential backoff, and never reorders responses.
    """

    BATCH_LIMIT = 64

    def __init__(
        self,
        base_url: str,
        *,
        client: httpx.Client | None = None,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
    ):
        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout)
        self.retries = retries
        self.backoff = backoff

    def _post(self, route: str, payload: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.retries):
            try:
                response = self._client.post(self.base_url + route, json=payload)
                if response.status_code >= 500:
                    last_error = RuntimeError(f"{route} returned {response.status_code}")
                elif response.status_code != 200:
                    raise AnnotationBackendError(
                        f"{route} returned {response.status_code}: {response.text[:200]}"
                    )
                else:
                    return response.json()
            except (httpx.TransportError, httpx.TimeoutException) as exc:
                last_error = exc
            if attempt + 1 < self.retries:
                time.sleep(self.backoff * (2**attempt))
        raise AnnotationBackendError(f"{route} failed after {self.retries} attempts: {last_error}")

    def emotions(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        results: list[tuple[str, float]] = []
        for start in range(0, len(texts), self.BATCH_LIMIT):
            batch = list(texts[start : start + self.BATCH_LIMIT])
            data = self._post("/v1/emotions", {"texts": batch})
            rows = data.get("results", [])
            if len(rows) != len(batch):
                raise AnnotationBackendError(
                    f"/v1/emotions returned {len(rows)} results for {len(batch)} texts"
                )
            results.extend((row["label"], float(row["score"])) for row in rows)
        return results

    def depression(self, text: str) -> tuple[str, float]:
        data = self._post("/v1/depression", {"text": text})
        return (data["label"], float(data["score"]))


def _annotate_one(
    post: RawPost,
    sentences: Sequence[Sentence],
    annotator: Annotator,
    policy: str,
) -> AnnotatedPost:
    texts = [s.text for s in sentences]
    try:
        labeled = annotator.emotions(texts) if texts else []
        full_text = " ".join(part for part in (post.title.strip(), post.body.strip()) if part)
        dep_name, dep_score = annotator.depression(full_text)
    except AnnotationBackendError as exc:
        if exc.post_id is None:
            raise AnnotationBackendError(str(exc), post.id) from exc
        raise
    for emotion, score in labeled:
        if not is_emotion(emotion):
            raise AnnotationBackendError(f"backend returned unknown emotion {emotion!r}", post.id)
        if not 0.0 <= score <= 1.0:
            raise AnnotationBackendError(f"backend returned score {score} outside [0,1]", post.id)
    if dep_name not in DEPRESSION_LABELS:
        raise AnnotationBackendError(f"backend returned unknown depression label {dep_name!r}", post.id)
    depression = DepressionLabel(dep_name, dep_score)
    return AnnotatedPost(
        post_id=post.id,
        sentence_emotions=[
            SentenceEmotion(index=s.index, emotion=emotion, score=score)
            for s, (emotion, score) in zip(sentences, labeled)
        ],
        depression=depression,
        outcome=binarize_depression(depression, policy),
    )


def annotate_corpus(
    segmented: Sequence[tuple[RawPost, Sequence[Sentence]]],
    annotator: Annotator,
    *,
    policy: str = "moderate_or_severe",
    concurrency: int = 4,
) -> list[AnnotatedPost]:
    """Annotate already-segmented posts.

    Requests may be in flight concurrently up to ``concurrency``, but the
    output order always matches the input order. Any backend failure
    aborts the whole run: no partial corpus is returned.
    """
    if policy not in BINARIZE_POLICIES:
        raise ValueError(f"unknown binarization policy {policy!r}")
    if not segmented:
        return []
    if concurrency <= 1 or len(segmented) == 1:
        return [_annotate_one(post, sentences, annotator, policy) for post, sentences in segmented]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        futures = [
            pool.submit(_annotate_one, post, sentences, annotator, policy)
            for post, sentences in segmented
        ]
        results = []
        for (post, _), future in zip(segmented, futures):
            try:
                results.append(future.result())
            except AnnotationBackendError:
                raise
            except Exception as exc:  # surface the failing post id
                raise AnnotationBackendError(str(exc), post.id) from exc
    return results


def save_annotations(posts: Sequence[AnnotatedPost], path) -> None:
    """Write the labeled-corpus JSON-lines format."""
    with open(path, "w", encoding="utf-8") as fh:
        for post in posts:
            record = {
                "id": post.post_id,
                "outcome": post.outcome,
                "depression": post.depression.label,
                "depression_score": post.depression.score,
                "sentences": [
                    {"i": se.index, "emotion": se.emotion, "score": se.score}
                    for se in post.sentence_emotions
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_annotations(path) -> list[AnnotatedPost]:
    """Read the labeled-corpus format; round-trips with save_annotations."""
    posts: list[AnnotatedPost] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolationError(f"invalid JSON: {exc}", lineno) from exc
            posts.append(_parse_labeled(obj, lineno))
    return posts


def _parse_labeled(obj, lineno: int) -> AnnotatedPost:
    if not isinstance(obj, dict):
        raise SchemaViolationError("record is not an object", lineno)
    post_id = obj.get("id")
    if not isinstance(post_id, str) or not post_id:
        raise SchemaViolationError("missing or invalid 'id'", lineno)
    outcome = obj.get("outcome")
    if outcome not in (0, 1):
        raise SchemaViolationError(f"outcome must be 0 or 1, got {outcome!r}", lineno)
    dep_name = obj.get("depression")
    if dep_name not in DEPRESSION_LABELS:
        raise SchemaViolationError(f"unknown depression label {dep_name!r}", lineno)
    dep_score = obj.get("depression_score", 1.0)
    if not isinstance(dep_score, (int, float)) or not 0.0 <= dep_score <= 1.0:
        raise SchemaViolationError(f"depression_score {dep_score!r} outside [0,1]", lineno)
    sentences = obj.get("sentences")
    if not isinstance(sentences, list):
        raise SchemaViolationError("missing 'sentences' list", lineno)
    parsed = []
    for entry in sentences:
        if not isinstance(entry, dict):
            raise SchemaViolationError("sentence entry is not an object", lineno)
        emotion = entry.get("emotion")
        if not isinstance(emotion, str) or not is_emotion(emotion):
            raise SchemaViolationError(f"unknown emotion {emotion!r}", lineno)
        index = entry.get("i")
        if not isinstance(index, int) or isinstance(index, bool) or index < 0:
            raise SchemaViolationError(f"invalid sentence index {index!r}", lineno)
        score = entry.get("score", 1.0)
        if not isinstance(score, (int, float)) or not 0.0 <= score <= 1.0:
            raise SchemaViolationError(f"score {score!r} outside [0,1]", lineno)
        parsed.append(SentenceEmotion(index=index, emotion=emotion, score=float(score)))
    return AnnotatedPost(
        post_id=post_id,
        sentence_emotions=parsed,
        depression=DepressionLabel(dep_name, float(dep_score)),
        outcome=outcome,
    )
