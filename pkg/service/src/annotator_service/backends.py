"""Classification backends: scripted stub and transformer inference.

The stub serves responses from a fixture file with no model loaded, so
integration tests never download weights. The transformer backend wraps
pretrained sentence-emotion and depression-severity models in evaluation
mode; inference is deterministic for fixed weights.
"""

from __future__ import annotations

import json
from typing import Protocol

from .labels import EMOTION_LABELS, normalize_depression

DEFAULT_EMOTION_MODEL = "SamLowe/roberta-base-go_emotions"
DEFAULT_DEPRESSION_MODEL = "rafalposwiata/deproberta-large-depression"


class Backend(Protocol):
    loaded: bool
    mode: str

    def emotions(self, texts: list[str]) -> list[dict]: ...

    def depression(self, text: str) -> dict: ...


class StubBackend:
    """Scripted responses keyed by exact text; deterministic fallbacks."""

    mode = "stub"
    loaded = True

    def __init__(self, fixture: dict | None = None):
        fixture = fixture or {}
        self._emotions = dict(fixture.get("emotions", {}))
        self._depression = dict(fixture.get("depression", {}))
        self._default_emotion = fixture.get(
            "default_emotion", {"label": "neutral", "score": 0.5}
        )
        self._default_depression = fixture.get(
            "default_depression", {"label": "not_depressed", "score": 0.5}
        )
        for entry in list(self._emotions.values()) + [self._default_emotion]:
            if entry["label"] not in EMOTION_LABELS:
                raise ValueError(f"fixture maps to unknown emotion {entry['label']!r}")

    @classmethod
    def from_file(cls, path) -> "StubBackend":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def emotions(self, texts: list[str]) -> list[dict]:
        return [dict(self._emotions.get(text, self._default_emotion)) for text in texts]

    def depression(self, text: str) -> dict:
        response = dict(self._depression.get(text, self._default_depression))
        response.setdefault("truncated", False)
        return response


class TransformerBackend:
    """Lazy-loaded pretrained classifiers behind the same interface."""

    mode = "model"

    def __init__(
        self,
        emotion_model: str = DEFAULT_EMOTION_MODEL,
        depression_model: str = DEFAULT_DEPRESSION_MODEL,
        max_length: int = 512,
    ):
        from transformers import pipeline  # deferred: heavy import

        self._emotion = pipeline(
            "text-classification", model=emotion_model, top_k=1, truncation=True
        )
        self._depression = pipeline(
            "text-classification", model=depression_model, top_k=1, truncation=True
        )
        self._tokenizer = self._depression.tokenizer
        self.max_length = max_length
        self.loaded = True

    def emotions(self, texts: list[str]) -> list[dict]:
        outputs = self._emotion(texts)
        results = []
        for output in outputs:
            top = output[0] if isinstance(output, list) else output
            label = top["label"].lower()
            if label not in EMOTION_LABELS:
                raise ValueError(f"classifier produced unknown emotion {label!r}")
            results.append({"label": label, "score": float(top["score"])})
        return results

    def depression(self, text: str) -> dict:
        tokens = self._tokenizer(text, truncation=False)["input_ids"]
        truncated = len(tokens) > self.max_length
        output = self._depression(text)
        top = output[0] if isinstance(output, list) else output
        if isinstance(top, list):
            top = top[0]
        return {
            "label": normalize_depression(top["label"]),
            "score": float(top["score"]),
            "truncated": truncated,
        }
